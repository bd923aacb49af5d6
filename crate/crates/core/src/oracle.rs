//! The brute-force evaluator used as the standard of correctness.
//!
//! Each of the four conclusion tags has a defining condition that reads
//! other conclusions only positively, so the set of derivable
//! conclusions is the least fixpoint of the four conditions taken
//! together. This module computes it the transparent way: re-evaluate
//! every candidate against the current set until a full pass adds
//! nothing. Quadratic (or worse), which is fine at test scale; the point
//! is that each condition is spelled out directly, with no shared
//! machinery with the engines it is used to check.
//!
//! The conditions, for a literal q with complement ~q:
//!
//! * `+Δq`: q is a fact, or some strict rule for q has an all-`+Δ` body.
//! * `−Δq`: q is not a fact, and every strict rule for q has a `−Δ`
//!   body literal.
//! * `+∂q`: `+Δq`; or some strict-or-defeasible rule for q has an
//!   all-`+∂` body, `−Δ~q` holds, and every rule for ~q (defeaters
//!   included) either has a `−∂` body literal or is beaten by some
//!   all-`+∂`-bodied strict-or-defeasible rule for q.
//! * `−∂q`: `−Δq`, and: every strict-or-defeasible rule for q has a
//!   `−∂` body literal; or `+Δ~q`; or some rule for ~q has an all-`+∂`
//!   body and no all-`+∂`-bodied strict-or-defeasible rule for q beats
//!   it.
//!
//! Superiority is consulted as given, pair by pair; beating requires the
//! recorded pair, not a chain of pairs. A rule with an empty body counts
//! as applicable under every universal body condition and fails every
//! existential one.

use std::collections::HashSet;

use crate::conclusions::{ConclusionSet, Tag, TaggedConclusion};
use crate::intern::LitInterner;
use crate::theory::{RuleKind, Theory};

/// Conclusions in the order the fixpoint added them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    steps: Vec<TaggedConclusion>,
}

impl DerivationTrace {
    pub(crate) fn new(steps: Vec<TaggedConclusion>) -> Self {
        DerivationTrace { steps }
    }

    pub fn steps(&self) -> &[TaggedConclusion] {
        &self.steps
    }

    /// One numbered line per derivation step.
    pub fn rendered(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!("{:4}. {step}\n", i + 1));
        }
        out
    }
}

struct OracleState {
    interner: LitInterner,
    is_fact: Vec<bool>,
    /// Rule indices by head literal id: strict; strict or defeasible;
    /// and all three kinds.
    strict: Vec<Vec<usize>>,
    supporting: Vec<Vec<usize>>,
    attacking: Vec<Vec<usize>>,
    bodies: Vec<Vec<u32>>,
    beats: HashSet<(usize, usize)>,
    plus_delta: Vec<bool>,
    minus_delta: Vec<bool>,
    plus_partial: Vec<bool>,
    minus_partial: Vec<bool>,
}

impl OracleState {
    fn build(theory: &Theory) -> Self {
        let interner = LitInterner::from_theory(theory);
        let n = interner.universe();
        let mut is_fact = vec![false; n];
        for fact in theory.facts() {
            is_fact[interner.id(fact) as usize] = true;
        }

        let mut strict = vec![Vec::new(); n];
        let mut supporting = vec![Vec::new(); n];
        let mut attacking = vec![Vec::new(); n];
        let mut bodies = Vec::with_capacity(theory.rules().len());
        for (i, rule) in theory.rules().iter().enumerate() {
            let head = interner.id(rule.head()) as usize;
            match rule.kind() {
                RuleKind::Strict => {
                    strict[head].push(i);
                    supporting[head].push(i);
                }
                RuleKind::Defeasible => supporting[head].push(i),
                RuleKind::Defeater => {}
            }
            attacking[head].push(i);
            bodies.push(rule.body().iter().map(|lit| interner.id(lit)).collect());
        }

        let by_label: std::collections::HashMap<&str, usize> = theory
            .rules()
            .iter()
            .enumerate()
            .map(|(i, r)| (r.label(), i))
            .collect();
        let beats = theory
            .superiority()
            .iter()
            .map(|(sup, inf)| (by_label[sup.as_str()], by_label[inf.as_str()]))
            .collect();

        OracleState {
            interner,
            is_fact,
            strict,
            supporting,
            attacking,
            bodies,
            beats,
            plus_delta: vec![false; n],
            minus_delta: vec![false; n],
            plus_partial: vec![false; n],
            minus_partial: vec![false; n],
        }
    }

    fn body_all_plus_delta(&self, rule: usize) -> bool {
        self.bodies[rule].iter().all(|&a| self.plus_delta[a as usize])
    }

    fn body_some_minus_delta(&self, rule: usize) -> bool {
        self.bodies[rule].iter().any(|&a| self.minus_delta[a as usize])
    }

    /// Every body literal defeasibly provable.
    fn applicable(&self, rule: usize) -> bool {
        self.bodies[rule]
            .iter()
            .all(|&a| self.plus_partial[a as usize])
    }

    /// Some body literal defeasibly unprovable.
    fn discarded(&self, rule: usize) -> bool {
        self.bodies[rule]
            .iter()
            .any(|&a| self.minus_partial[a as usize])
    }

    fn definitely(&self, q: usize) -> bool {
        self.is_fact[q] || self.strict[q].iter().any(|&r| self.body_all_plus_delta(r))
    }

    fn not_definitely(&self, q: usize) -> bool {
        !self.is_fact[q] && self.strict[q].iter().all(|&r| self.body_some_minus_delta(r))
    }

    fn defeasibly(&self, q: usize) -> bool {
        if self.plus_delta[q] {
            return true;
        }
        let c = LitInterner::complement(q as u32) as usize;
        if !self.minus_delta[c] {
            return false;
        }
        if !self.supporting[q].iter().any(|&r| self.applicable(r)) {
            return false;
        }
        self.attacking[c].iter().all(|&s| {
            self.discarded(s)
                || self.supporting[q]
                    .iter()
                    .any(|&t| self.applicable(t) && self.beats.contains(&(t, s)))
        })
    }

    fn not_defeasibly(&self, q: usize) -> bool {
        if !self.minus_delta[q] {
            return false;
        }
        let c = LitInterner::complement(q as u32) as usize;
        if self.supporting[q].iter().all(|&r| self.discarded(r)) {
            return true;
        }
        if self.plus_delta[c] {
            return true;
        }
        self.attacking[c].iter().any(|&s| {
            self.applicable(s)
                && self.supporting[q]
                    .iter()
                    .all(|&t| self.discarded(t) || !self.beats.contains(&(t, s)))
        })
    }

    fn flag(&mut self, tag: Tag, q: usize) -> &mut bool {
        match tag {
            Tag::PlusDelta => &mut self.plus_delta[q],
            Tag::MinusDelta => &mut self.minus_delta[q],
            Tag::PlusPartial => &mut self.plus_partial[q],
            Tag::MinusPartial => &mut self.minus_partial[q],
            _ => unreachable!("oracle computes external tags only"),
        }
    }

    /// Closes the current flags under the four conditions, appending
    /// each addition to `trace`.
    fn close(&mut self, trace: &mut Vec<TaggedConclusion>) {
        const TAGS: [Tag; 4] = [
            Tag::PlusDelta,
            Tag::MinusDelta,
            Tag::PlusPartial,
            Tag::MinusPartial,
        ];
        loop {
            let mut added = false;
            for q in 0..self.interner.universe() {
                for tag in TAGS {
                    if *self.flag(tag, q) {
                        continue;
                    }
                    let holds = match tag {
                        Tag::PlusDelta => self.definitely(q),
                        Tag::MinusDelta => self.not_definitely(q),
                        Tag::PlusPartial => self.defeasibly(q),
                        Tag::MinusPartial => self.not_defeasibly(q),
                        _ => unreachable!(),
                    };
                    if holds {
                        *self.flag(tag, q) = true;
                        trace.push(TaggedConclusion::new(
                            tag,
                            self.interner.literal(q as u32),
                        ));
                        added = true;
                    }
                }
            }
            if !added {
                return;
            }
        }
    }

    fn conclusions(&self, theory: &Theory) -> ConclusionSet {
        let mut set = ConclusionSet::new(theory.atoms());
        for q in 0..self.interner.universe() {
            let lit = self.interner.literal(q as u32);
            for (flag, tag) in [
                (&self.plus_delta, Tag::PlusDelta),
                (&self.minus_delta, Tag::MinusDelta),
                (&self.plus_partial, Tag::PlusPartial),
                (&self.minus_partial, Tag::MinusPartial),
            ] {
                if flag[q] {
                    set.add(tag, lit.clone());
                }
            }
        }
        set
    }
}

/// Computes all derivable conclusions of `theory` by fixpoint
/// re-evaluation. With `want_trace`, also returns the addition order.
pub fn run_oracle(theory: &Theory, want_trace: bool) -> (ConclusionSet, Option<DerivationTrace>) {
    let mut state = OracleState::build(theory);
    let mut trace = Vec::new();
    state.close(&mut trace);
    let set = state.conclusions(theory);
    let trace = want_trace.then(|| DerivationTrace::new(trace));
    (set, trace)
}

/// Closes `initial` under the four conditions. Seeding with any subset
/// of the derivable conclusions reproduces `run_oracle`'s set exactly;
/// this is exercised by the fuzz suite.
pub fn oracle_fixpoint_from(
    theory: &Theory,
    initial: impl IntoIterator<Item = TaggedConclusion>,
) -> ConclusionSet {
    let mut state = OracleState::build(theory);
    for conclusion in initial {
        assert!(
            conclusion.tag.is_external(),
            "fixpoint seeds must use external tags"
        );
        let q = state.interner.id(&conclusion.literal) as usize;
        *state.flag(conclusion.tag, q) = true;
    }
    let mut trace = Vec::new();
    state.close(&mut trace);
    state.conclusions(theory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::text::parse_theory;
    use crate::theory::{Atom, Literal};

    fn oracle(source: &str) -> ConclusionSet {
        run_oracle(&parse_theory(source).unwrap(), false).0
    }

    fn pos(name: &str) -> Literal {
        Literal::pos(Atom::named(name).unwrap())
    }

    fn neg(name: &str) -> Literal {
        Literal::neg(Atom::named(name).unwrap())
    }

    fn tagged(set: &ConclusionSet, tag: Tag) -> Vec<String> {
        let mut v: Vec<String> = set
            .iter()
            .filter(|c| c.tag == tag)
            .map(|c| c.literal.rendered())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn facts_are_definite_and_defeasible() {
        let set = oracle("a.\n");
        assert!(set.contains(Tag::PlusDelta, &pos("a")));
        assert!(set.contains(Tag::PlusPartial, &pos("a")));
        assert!(set.contains(Tag::MinusDelta, &neg("a")));
        assert!(set.contains(Tag::MinusPartial, &neg("a")));
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn strict_chain_propagates_delta() {
        let set = oracle("a.\nr1: a -> b.\nr2: b -> c.\n");
        for name in ["a", "b", "c"] {
            assert!(set.contains(Tag::PlusDelta, &pos(name)));
            assert!(set.contains(Tag::PlusPartial, &pos(name)));
        }
    }

    #[test]
    fn defeasible_rule_alone_supports_its_head() {
        let set = oracle("r1: => a.\n");
        assert!(set.contains(Tag::MinusDelta, &pos("a")));
        assert!(set.contains(Tag::PlusPartial, &pos("a")));
        assert!(set.contains(Tag::MinusPartial, &neg("a")));
    }

    #[test]
    fn defeater_blocks_but_never_supports() {
        // The unbeaten defeater for ~a refutes a defeasibly, yet lends
        // ~a no support of its own.
        let set = oracle("r1: => a.\nr2: ~> ~a.\n");
        assert!(!set.contains(Tag::PlusPartial, &pos("a")));
        assert!(set.contains(Tag::MinusPartial, &pos("a")));
        assert!(!set.contains(Tag::PlusPartial, &neg("a")));
        assert!(set.contains(Tag::MinusPartial, &neg("a")));
    }

    #[test]
    fn interference_refutes_both_sides() {
        let set = oracle(samples::INTERFERENCE);
        assert_eq!(tagged(&set, Tag::MinusDelta), ["a", "~a"]);
        assert_eq!(tagged(&set, Tag::MinusPartial), ["a", "~a"]);
        assert!(tagged(&set, Tag::PlusDelta).is_empty());
        assert!(tagged(&set, Tag::PlusPartial).is_empty());
    }

    #[test]
    fn strict_loop_leaves_p_undetermined() {
        let set = oracle(samples::LOOP);
        for tag in [
            Tag::PlusDelta,
            Tag::MinusDelta,
            Tag::PlusPartial,
            Tag::MinusPartial,
        ] {
            assert!(!set.contains(tag, &pos("p")), "{tag:?} p unexpectedly set");
        }
        // The complement, with no rules at all, is settled negative.
        assert!(set.contains(Tag::MinusDelta, &neg("p")));
        assert!(set.contains(Tag::MinusPartial, &neg("p")));
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn superiority_lets_the_stronger_rule_win() {
        let set = oracle(samples::BROKEN_WING);
        assert!(set.contains(Tag::PlusPartial, &neg("flies")));
        assert!(set.contains(Tag::MinusPartial, &pos("flies")));
    }

    #[test]
    fn team_defeat_on_the_platypus() {
        let set = oracle(samples::PLATYPUS);
        assert!(set.contains(Tag::PlusPartial, &pos("mammal_platypus")));
        assert!(set.contains(Tag::MinusPartial, &neg("mammal_platypus")));
    }

    #[test]
    fn half_beaten_team_does_not_win() {
        // Only one attacker is beaten; the other stands, so neither side
        // is defeasibly provable.
        let set = oracle(
            "f1. f2. f3. f4.\n\
             r1: f1 => m.\nr2: f2 => m.\nr3: f3 => ~m.\nr4: f4 => ~m.\n\
             r1 > r3.\n",
        );
        assert!(!set.contains(Tag::PlusPartial, &pos("m")));
        assert!(set.contains(Tag::MinusPartial, &pos("m")));
        assert!(!set.contains(Tag::PlusPartial, &neg("m")));
        assert!(set.contains(Tag::MinusPartial, &neg("m")));
    }

    #[test]
    fn bird_sample_full_conclusion_set() {
        let set = oracle(samples::DBIRD);
        assert_eq!(
            tagged(&set, Tag::PlusDelta),
            ["bird_ethel", "bird_tweety", "emu_ethel"]
        );
        assert_eq!(
            tagged(&set, Tag::PlusPartial),
            [
                "bird_ethel",
                "bird_tweety",
                "emu_ethel",
                "flies_tweety",
                "heavy_ethel"
            ]
        );
        // Everything else in the 20-literal universe is settled negative.
        assert_eq!(tagged(&set, Tag::MinusDelta).len(), 17);
        assert_eq!(tagged(&set, Tag::MinusPartial).len(), 15);
        assert_eq!(set.len(), 40);
        assert!(set.contains(Tag::MinusPartial, &pos("flies_ethel")));
        assert!(set.contains(Tag::MinusPartial, &neg("flies_ethel")));
        assert!(set.contains(Tag::MinusPartial, &neg("flies_tweety")));
        assert!(set.contains(Tag::MinusDelta, &pos("heavy_tweety")));
        assert!(set.contains(Tag::MinusPartial, &pos("brokenWing_ethel")));
        assert!(set.contains(Tag::MinusPartial, &pos("brokenWing_tweety")));
        set.check_coherence().unwrap();
        set.check_subsumption().unwrap();
    }

    #[test]
    fn strict_rules_join_the_defeasible_fray() {
        // A strict rule with a provable body also counts as support (and
        // as attack) at the defeasible level, even when Δ fails.
        let set = oracle("r1: => a.\nr2: a -> b.\nr3: => ~b.\n");
        // a is only defeasibly provable, so r2 yields no +Δb; but r2
        // supports b defeasibly, and the interference with r3 is mutual.
        assert!(set.contains(Tag::MinusDelta, &pos("b")));
        assert!(!set.contains(Tag::PlusPartial, &pos("b")));
        assert!(!set.contains(Tag::PlusPartial, &neg("b")));
        assert!(set.contains(Tag::MinusPartial, &pos("b")));
        assert!(set.contains(Tag::MinusPartial, &neg("b")));
    }

    #[test]
    fn definite_proof_overrides_defeasible_attack() {
        // +Δ implies +∂ outright; attackers are irrelevant.
        let set = oracle("a.\nr1: a -> b.\nr2: => ~b.\n");
        assert!(set.contains(Tag::PlusDelta, &pos("b")));
        assert!(set.contains(Tag::PlusPartial, &pos("b")));
        // The attacker is blocked by the definite proof of b.
        assert!(set.contains(Tag::MinusPartial, &neg("b")));
    }

    #[test]
    fn both_sides_definite_is_possible_and_coherent() {
        // Contradictory facts: both literals definitely provable. The
        // defeasible tags follow the definite ones.
        let set = oracle("a.\n~a.\n");
        assert!(set.contains(Tag::PlusDelta, &pos("a")));
        assert!(set.contains(Tag::PlusDelta, &neg("a")));
        assert!(set.contains(Tag::PlusPartial, &pos("a")));
        assert!(set.contains(Tag::PlusPartial, &neg("a")));
        set.check_coherence().unwrap();
    }

    #[test]
    fn trace_steps_match_the_returned_set() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let (set, trace) = run_oracle(&theory, true);
        let trace = trace.unwrap();
        assert_eq!(trace.steps().len(), set.len());
        let replayed: ConclusionSet = trace.steps().iter().cloned().collect();
        for step in trace.steps() {
            assert!(set.contains(step.tag, &step.literal));
        }
        assert_eq!(replayed.len(), set.len());
        let first_line = trace.rendered();
        assert!(first_line.starts_with("   1. "));
    }

    #[test]
    fn no_trace_unless_requested() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        assert!(run_oracle(&theory, false).1.is_none());
    }

    #[test]
    fn fixpoint_from_subset_reaches_the_same_set() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let (full, _) = run_oracle(&theory, false);
        let half: Vec<TaggedConclusion> =
            full.iter().step_by(2).cloned().collect();
        let reclosed = oracle_fixpoint_from(&theory, half);
        assert_eq!(reclosed, full);
        let from_empty = oracle_fixpoint_from(&theory, []);
        assert_eq!(from_empty, full);
    }
}
