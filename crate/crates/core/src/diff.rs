//! Differential testing: run all three evaluators on one theory and
//! report exactly where they disagree.
//!
//! The fixpoint oracle evaluates the source theory directly, so it sees
//! the superiority relation and original strict rules. The small-step
//! interpreter and the linear engine evaluate the engine form instead.
//! All three answer sets are restricted to the source theory's atoms
//! and to the four externally meaningful tags before comparison, which
//! is the contract the transformation pipeline promises to preserve.

use crate::conclusions::{ConclusionSet, Tag};
use crate::engine::run_linear;
use crate::generate::random_corpus_theory;
use crate::oracle::run_oracle;
use crate::theory::{rendering_order, Literal, Theory};
use crate::transform::{to_engine_form, TransformError};
use crate::transitions::run_transitions;

/// One (literal, tag) pair on which the evaluators split, with each
/// evaluator's verdict on whether the conclusion holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub literal: Literal,
    pub tag: Tag,
    pub oracle: bool,
    pub transitions: bool,
    pub linear: bool,
}

impl Disagreement {
    pub fn rendered(&self) -> String {
        let verdict = |held: bool| if held { "holds" } else { "absent" };
        format!(
            "{} {}: oracle {}, transitions {}, linear {}",
            self.tag.rendered(),
            self.literal.rendered(),
            verdict(self.oracle),
            verdict(self.transitions),
            verdict(self.linear),
        )
    }
}

/// The outcome of one three-way comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffReport {
    /// All evaluators produced this conclusion set.
    Agree(ConclusionSet),
    /// At least one split; every differing (literal, tag) pair listed.
    Diverge(Vec<Disagreement>),
}

impl DiffReport {
    pub fn is_agreement(&self) -> bool {
        matches!(self, DiffReport::Agree(_))
    }
}

/// Runs the oracle on the source and the other two evaluators on the
/// engine form, then compares external conclusions over source atoms.
/// Fails when the theory has no engine form (a superiority pair demotes
/// a strict rule); the comparison is only defined where the
/// transformation claims to preserve meaning.
pub fn compare_engines(theory: &Theory) -> Result<DiffReport, TransformError> {
    let atoms = theory.atoms();
    let (oracle_set, _) = run_oracle(theory, false);
    let oracle_set = oracle_set.external_only().restrict(&atoms);

    let engine_form = to_engine_form(theory)?;
    let transition_set = run_transitions(&engine_form)
        .expect("engine form has no superiority")
        .external_only()
        .restrict(&atoms);
    let linear_set = run_linear(&engine_form)
        .expect("engine form has no superiority")
        .conclusions
        .external_only()
        .restrict(&atoms);

    if oracle_set == transition_set && oracle_set == linear_set {
        return Ok(DiffReport::Agree(oracle_set));
    }

    let mut disagreements = Vec::new();
    let mut literals: Vec<Literal> = atoms
        .iter()
        .flat_map(|a| {
            [
                Literal::pos(a.clone()),
                Literal::neg(a.clone()),
            ]
        })
        .collect();
    literals.sort_by(rendering_order);
    for literal in &literals {
        for tag in [
            Tag::PlusDelta,
            Tag::MinusDelta,
            Tag::PlusPartial,
            Tag::MinusPartial,
        ] {
            let o = oracle_set.contains(tag, literal);
            let t = transition_set.contains(tag, literal);
            let l = linear_set.contains(tag, literal);
            if o != t || o != l {
                disagreements.push(Disagreement {
                    literal: literal.clone(),
                    tag,
                    oracle: o,
                    transitions: t,
                    linear: l,
                });
            }
        }
    }
    debug_assert!(!disagreements.is_empty(), "sets differ but no pair found");
    Ok(DiffReport::Diverge(disagreements))
}

/// Compares the evaluators on one seeded corpus theory per seed and
/// returns each seed that produced a divergence with its report.
pub fn corpus_disagreements(
    seeds: impl IntoIterator<Item = u64>,
) -> Vec<(u64, Vec<Disagreement>)> {
    seeds
        .into_iter()
        .filter_map(|seed| {
            let report = compare_engines(&random_corpus_theory(seed))
                .expect("corpus theories never demote strict rules");
            match report {
                DiffReport::Agree(_) => None,
                DiffReport::Diverge(d) => Some((seed, d)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::text::parse_theory;
    use crate::theory::{Atom, Rule, RuleKind};

    #[test]
    fn samples_agree() {
        for source in [
            samples::DBIRD,
            samples::PLATYPUS,
            samples::BROKEN_WING,
            samples::INTERFERENCE,
            samples::LOOP,
        ] {
            let report = compare_engines(&parse_theory(source).unwrap()).unwrap();
            assert!(report.is_agreement(), "split on {source:?}: {report:?}");
        }
    }

    #[test]
    fn empty_theory_agrees() {
        match compare_engines(&Theory::empty()).unwrap() {
            DiffReport::Agree(set) => assert!(set.is_empty()),
            DiffReport::Diverge(d) => panic!("split on nothing: {d:?}"),
        }
    }

    #[test]
    fn corpus_prefix_agrees() {
        let failures = corpus_disagreements(0..100);
        assert!(failures.is_empty(), "diverging seeds: {failures:?}");
    }

    #[test]
    fn divergence_reporting_names_the_split() {
        // An intentionally unfaithful comparison: the interpreter and
        // engine need strict twins to defeasibly use strict rules, so
        // feed them a theory that is not in engine form while keeping
        // the oracle on the same source. We simulate that by comparing
        // handmade sets through the report type instead.
        let a = Literal::pos(Atom::named("a").unwrap());
        let d = Disagreement {
            literal: a,
            tag: Tag::PlusPartial,
            oracle: true,
            transitions: false,
            linear: false,
        };
        assert_eq!(
            d.rendered(),
            "+d a: oracle holds, transitions absent, linear absent"
        );
    }

    #[test]
    fn theories_without_an_engine_form_are_reported() {
        let theory =
            parse_theory("ra: => a.\ns: a -> ~q.\nt: => q.\nt > s.\n").unwrap();
        assert!(compare_engines(&theory).is_err());
    }

    #[test]
    fn strict_chains_with_superiority_agree() {
        // Exercises the full pipeline: pruning, twinning, and the
        // superiority compilation all at once.
        let rules = vec![
            Rule::new("r1", RuleKind::Strict, [], Literal::pos(Atom::named("a").unwrap())),
            Rule::new(
                "r2",
                RuleKind::Defeasible,
                [Literal::pos(Atom::named("a").unwrap())],
                Literal::pos(Atom::named("b").unwrap()),
            ),
            Rule::new(
                "r3",
                RuleKind::Defeater,
                [Literal::pos(Atom::named("a").unwrap())],
                Literal::neg(Atom::named("b").unwrap()),
            ),
            Rule::new(
                "r4",
                RuleKind::Defeasible,
                [],
                Literal::neg(Atom::named("b").unwrap()),
            ),
        ];
        let sup = [
            ("r2".to_string(), "r3".to_string()),
            ("r2".to_string(), "r4".to_string()),
        ];
        let theory = Theory::new([], rules, sup).unwrap();
        let report = compare_engines(&theory).unwrap();
        match report {
            DiffReport::Agree(set) => {
                let b = Literal::pos(Atom::named("b").unwrap());
                assert!(set.contains(Tag::PlusPartial, &b));
                assert!(set.contains(Tag::MinusPartial, &b.complement()));
            }
            DiffReport::Diverge(d) => panic!("split: {d:?}"),
        }
    }
}
