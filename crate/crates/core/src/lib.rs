//! Defeasible reasoning over propositional rule theories.
//!
//! A theory combines facts, strict rules, defeasible rules, defeaters,
//! and an acyclic superiority relation between rules. The crate computes
//! which literals are definitely provable, definitely unprovable,
//! defeasibly provable, and defeasibly unprovable, three independent
//! ways:
//!
//! * [`oracle`] restates the proof conditions directly as a fixpoint
//!   computation, quadratic but transparently faithful;
//! * [`transitions`] interprets a system of ten conclusion-and-residue
//!   rewriting steps, applied in any order until exhaustion;
//! * [`engine`] runs the same computation in time linear in the theory
//!   size, driven by a work queue over interned literals.
//!
//! [`transform`] normalizes arbitrary theories into the restricted form
//! the engine accepts, [`text`] reads and writes them, [`generate`]
//! builds parameterized families for testing and benchmarks, and
//! [`diff`] runs all engines side by side and reports any disagreement.

pub mod conclusions;
pub mod diff;
pub mod engine;
pub mod generate;
mod intern;
pub mod oracle;
pub mod samples;
pub mod text;
pub mod theory;
pub mod transform;
pub mod transitions;

pub use conclusions::{ConclusionSet, Tag, TagClass, TaggedConclusion};
pub use diff::{compare_engines, corpus_disagreements, DiffReport, Disagreement};
pub use engine::{
    run_linear, run_linear_with_mode, Engine, EngineError, EngineStats, LinearRun, QueueMode,
};
pub use oracle::{run_oracle, DerivationTrace};
pub use transform::{to_engine_form, TransformError};
pub use transitions::{run_transitions, TransitionError};
pub use text::{parse_theory, print_conclusions, print_theory, ParseError, ParseErrorKind};
pub use theory::{Atom, Literal, Rule, RuleClasses, RuleKind, Theory, TheoryError};
