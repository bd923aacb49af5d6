//! A small-step interpreter over states `(D, C)`: a shrinking copy of
//! the theory plus a growing set of extended conclusions. Ten kinds of
//! step exist; each either reads off a conclusion from the current
//! theory's shape or simplifies the theory as justified by recorded
//! conclusions:
//!
//! 1. facts and empty-bodied strict rules yield `{+Δq, +∂q, +σq}`;
//! 2. an empty-bodied defeasible rule yields `{+σq, +τq}`, an
//!    empty-bodied defeater `{+τq}`;
//! 3. no strict rule and no fact for q yields `−Δq`;
//! 4. no defeasible rule for q yields `−σq`; additionally no defeater
//!    yields `−τq`;
//! 5. `+Δq`, or `{+σq, −Δ~q, −τ~q}`, yields `+∂q`;
//! 6. `−Δq` together with one of `{+Δ~q, +τ~q, −σq}` yields `−∂q`;
//! 7. `+Δq` deletes q from strict-rule bodies;
//! 8. `+∂q` deletes q from defeasible and defeater bodies;
//! 9. `−Δq` deletes strict rules with q in the body;
//! 10. `−∂q` deletes defeasible rules and defeaters with q in the body.
//!
//! The final conclusion set is order-independent, so the default driver
//! just sweeps the kinds round-robin until nothing changes; a seeded
//! single-step mode exists to exercise that confluence in tests.
//!
//! The interpreter accepts any theory with an empty superiority
//! relation. Soundness for defeasibly-supported literals additionally
//! needs every strict rule to have a defeasible twin: without twins,
//! steps 4 and 10 treat a literal whose only support is strict as
//! unsupported, and wrongly conclude `−σ`/`−∂` for it.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::conclusions::{ConclusionSet, Tag, TaggedConclusion};
use crate::intern::LitInterner;
use crate::theory::{Rule, RuleKind, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("theory is not in engine form: the superiority relation is nonempty")]
    NotEngineForm,
}

struct StateRule {
    label: String,
    kind: RuleKind,
    head: u32,
    body: BTreeSet<u32>,
    alive: bool,
}

/// One enabled step instance: a conclusion to add or a deletion to
/// perform, with enough detail to re-check enabledness before applying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Definite(u32),
    EmptyNonStrict(usize),
    NotDefinite(u32),
    NoSupport(u32),
    NoAttack(u32),
    Defeasible(u32),
    NotDefeasible(u32),
    StrictBodyDelete(usize, u32),
    NonStrictBodyDelete(usize, u32),
    StrictRuleDelete(usize, u32),
    NonStrictRuleDelete(usize, u32),
}

const KINDS: usize = 11;

pub struct Interpreter {
    interner: LitInterner,
    language: BTreeSet<crate::theory::Atom>,
    facts: Vec<bool>,
    rules: Vec<StateRule>,
    tags: [Vec<bool>; 8],
    order: Vec<TaggedConclusion>,
}

fn slot(tag: Tag) -> usize {
    match tag {
        Tag::PlusDelta => 0,
        Tag::MinusDelta => 1,
        Tag::PlusPartial => 2,
        Tag::MinusPartial => 3,
        Tag::PlusSigma => 4,
        Tag::MinusSigma => 5,
        Tag::PlusTau => 6,
        Tag::MinusTau => 7,
    }
}

impl Interpreter {
    pub fn new(theory: &Theory) -> Result<Self, TransitionError> {
        if !theory.superiority().is_empty() {
            return Err(TransitionError::NotEngineForm);
        }
        let interner = LitInterner::from_theory(theory);
        let n = interner.universe();
        let mut facts = vec![false; n];
        for fact in theory.facts() {
            facts[interner.id(fact) as usize] = true;
        }
        let rules = theory
            .rules()
            .iter()
            .map(|r| StateRule {
                label: r.label().to_string(),
                kind: r.kind(),
                head: interner.id(r.head()),
                body: r.body().iter().map(|l| interner.id(l)).collect(),
                alive: true,
            })
            .collect();
        Ok(Interpreter {
            interner,
            language: theory.atoms(),
            facts,
            rules,
            tags: std::array::from_fn(|_| vec![false; n]),
            order: Vec::new(),
        })
    }

    fn has(&self, tag: Tag, q: u32) -> bool {
        self.tags[slot(tag)][q as usize]
    }

    fn add(&mut self, tag: Tag, q: u32) -> bool {
        let flag = &mut self.tags[slot(tag)][q as usize];
        if *flag {
            return false;
        }
        *flag = true;
        self.order
            .push(TaggedConclusion::new(tag, self.interner.literal(q)));
        true
    }

    fn live_rules(&self) -> impl Iterator<Item = (usize, &StateRule)> {
        self.rules.iter().enumerate().filter(|(_, r)| r.alive)
    }

    fn some_head(&self, q: u32, pred: impl Fn(&StateRule) -> bool) -> bool {
        self.live_rules().any(|(_, r)| r.head == q && pred(r))
    }

    /// Step 1 condition: q settled definite by a fact or an emptied
    /// strict rule.
    fn definite_ready(&self, q: u32) -> bool {
        self.facts[q as usize]
            || self.some_head(q, |r| r.kind == RuleKind::Strict && r.body.is_empty())
    }

    fn enabled(&self, step: Step) -> bool {
        match step {
            Step::Definite(q) => {
                self.definite_ready(q)
                    && !(self.has(Tag::PlusDelta, q)
                        && self.has(Tag::PlusPartial, q)
                        && self.has(Tag::PlusSigma, q))
            }
            Step::EmptyNonStrict(i) => {
                let r = &self.rules[i];
                r.alive
                    && r.body.is_empty()
                    && match r.kind {
                        RuleKind::Defeasible => {
                            !(self.has(Tag::PlusSigma, r.head) && self.has(Tag::PlusTau, r.head))
                        }
                        RuleKind::Defeater => !self.has(Tag::PlusTau, r.head),
                        RuleKind::Strict => false,
                    }
            }
            Step::NotDefinite(q) => {
                !self.has(Tag::MinusDelta, q)
                    && !self.facts[q as usize]
                    && !self.some_head(q, |r| r.kind == RuleKind::Strict)
            }
            Step::NoSupport(q) => {
                !self.has(Tag::MinusSigma, q)
                    && !self.some_head(q, |r| r.kind == RuleKind::Defeasible)
            }
            Step::NoAttack(q) => {
                !self.has(Tag::MinusTau, q)
                    && !self.some_head(q, |r| r.kind != RuleKind::Strict)
            }
            Step::Defeasible(q) => {
                let c = LitInterner::complement(q);
                !self.has(Tag::PlusPartial, q)
                    && (self.has(Tag::PlusDelta, q)
                        || (self.has(Tag::PlusSigma, q)
                            && self.has(Tag::MinusDelta, c)
                            && self.has(Tag::MinusTau, c)))
            }
            Step::NotDefeasible(q) => {
                let c = LitInterner::complement(q);
                !self.has(Tag::MinusPartial, q)
                    && self.has(Tag::MinusDelta, q)
                    && (self.has(Tag::PlusDelta, c)
                        || self.has(Tag::PlusTau, c)
                        || self.has(Tag::MinusSigma, q))
            }
            Step::StrictBodyDelete(i, q) => {
                let r = &self.rules[i];
                r.alive
                    && r.kind == RuleKind::Strict
                    && r.body.contains(&q)
                    && self.has(Tag::PlusDelta, q)
            }
            Step::NonStrictBodyDelete(i, q) => {
                let r = &self.rules[i];
                r.alive
                    && r.kind != RuleKind::Strict
                    && r.body.contains(&q)
                    && self.has(Tag::PlusPartial, q)
            }
            Step::StrictRuleDelete(i, q) => {
                let r = &self.rules[i];
                r.alive
                    && r.kind == RuleKind::Strict
                    && r.body.contains(&q)
                    && self.has(Tag::MinusDelta, q)
            }
            Step::NonStrictRuleDelete(i, q) => {
                let r = &self.rules[i];
                r.alive
                    && r.kind != RuleKind::Strict
                    && r.body.contains(&q)
                    && self.has(Tag::MinusPartial, q)
            }
        }
    }

    fn apply(&mut self, step: Step) {
        match step {
            Step::Definite(q) => {
                self.add(Tag::PlusDelta, q);
                self.add(Tag::PlusPartial, q);
                self.add(Tag::PlusSigma, q);
            }
            Step::EmptyNonStrict(i) => {
                let (head, kind) = (self.rules[i].head, self.rules[i].kind);
                if kind == RuleKind::Defeasible {
                    self.add(Tag::PlusSigma, head);
                }
                self.add(Tag::PlusTau, head);
            }
            Step::NotDefinite(q) => {
                self.add(Tag::MinusDelta, q);
            }
            Step::NoSupport(q) => {
                self.add(Tag::MinusSigma, q);
            }
            Step::NoAttack(q) => {
                self.add(Tag::MinusTau, q);
            }
            Step::Defeasible(q) => {
                self.add(Tag::PlusPartial, q);
            }
            Step::NotDefeasible(q) => {
                self.add(Tag::MinusPartial, q);
            }
            Step::StrictBodyDelete(i, q) | Step::NonStrictBodyDelete(i, q) => {
                self.rules[i].body.remove(&q);
            }
            Step::StrictRuleDelete(i, _) | Step::NonStrictRuleDelete(i, _) => {
                self.rules[i].alive = false;
            }
        }
    }

    /// All enabled instances of one step kind (1-based).
    fn instances_of(&self, kind: usize) -> Vec<Step> {
        let mut out = Vec::new();
        let universe = self.interner.universe() as u32;
        match kind {
            1 => out.extend((0..universe).map(Step::Definite)),
            2 => out.extend((0..self.rules.len()).map(Step::EmptyNonStrict)),
            3 => out.extend((0..universe).map(Step::NotDefinite)),
            4 => {
                out.extend((0..universe).map(Step::NoSupport));
                out.extend((0..universe).map(Step::NoAttack));
            }
            5 => out.extend((0..universe).map(Step::Defeasible)),
            6 => out.extend((0..universe).map(Step::NotDefeasible)),
            7..=10 => {
                for (i, r) in self.live_rules() {
                    for &q in &r.body {
                        out.push(match kind {
                            7 => Step::StrictBodyDelete(i, q),
                            8 => Step::NonStrictBodyDelete(i, q),
                            9 => Step::StrictRuleDelete(i, q),
                            _ => Step::NonStrictRuleDelete(i, q),
                        });
                    }
                }
            }
            _ => unreachable!("step kinds are 1..=10"),
        }
        out.retain(|&s| self.enabled(s));
        out
    }

    /// One round-robin sweep over all step kinds, applying every
    /// instance still enabled when its turn comes. True if anything
    /// changed.
    fn sweep(&mut self) -> bool {
        let mut changed = false;
        for kind in 1..KINDS {
            for step in self.instances_of(kind) {
                if self.enabled(step) {
                    self.apply(step);
                    changed = true;
                }
            }
        }
        changed
    }

    pub fn run_to_fixpoint(&mut self) {
        while self.sweep() {}
    }

    /// Applies one enabled step chosen uniformly at random; false when
    /// no step is enabled (the state is final).
    pub fn step_random(&mut self, rng: &mut impl Rng) -> bool {
        let enabled: Vec<Step> = (1..KINDS).flat_map(|k| self.instances_of(k)).collect();
        if enabled.is_empty() {
            return false;
        }
        self.apply(enabled[rng.gen_range(0..enabled.len())]);
        true
    }

    /// The current simplified theory: surviving rules with surviving
    /// body literals, facts unchanged, no superiority.
    pub fn current_theory(&self) -> Theory {
        let facts = self
            .facts
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| self.interner.literal(q as u32));
        let rules = self
            .live_rules()
            .map(|(_, r)| {
                Rule::new(
                    r.label.clone(),
                    r.kind,
                    r.body.iter().map(|&q| self.interner.literal(q)),
                    self.interner.literal(r.head),
                )
            })
            .collect();
        Theory::new(facts, rules, []).expect("labels stay unique under deletion")
    }

    /// Everything recorded so far, auxiliary tags included.
    pub fn conclusions(&self) -> ConclusionSet {
        let mut set = ConclusionSet::new(self.language.clone());
        for (s, tag) in Tag::ALL.iter().enumerate() {
            for (q, &on) in self.tags[s].iter().enumerate() {
                if on {
                    set.add(*tag, self.interner.literal(q as u32));
                }
            }
        }
        set
    }

    /// Conclusions added so far, in addition order.
    pub fn order(&self) -> &[TaggedConclusion] {
        &self.order
    }
}

/// Runs the interpreter to its final state and returns the external
/// conclusions (definite and defeasible tags only).
pub fn run_transitions(theory: &Theory) -> Result<ConclusionSet, TransitionError> {
    let mut interp = Interpreter::new(theory)?;
    interp.run_to_fixpoint();
    Ok(interp.conclusions().external_only())
}
