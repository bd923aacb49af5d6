//! Theory-to-theory rewritings that prepare arbitrary theories for the
//! linear engine: drop inert superiority pairs, give every strict rule
//! a defeasible twin, and compile the remaining superiority pairs away
//! into marker atoms. Defeaters pass through untouched; the engine
//! handles them natively.
//!
//! All rewritings preserve the derivable conclusions over the source
//! theory's atoms, on one condition: no superiority pair may place a
//! strict rule in the inferior position. A strict rule survives
//! compilation verbatim (it must, to keep definite provability intact),
//! so no compiled gadget can ever silence its defeasible attack, while
//! in the source a superior rule beats it like any other attacker.
//! [`to_engine_form`] rejects such theories rather than quietly
//! changing their meaning.
//!
//! Generated atoms and labels start from a `__`-marked base name and
//! grow an `x` suffix while the name is already taken, so transforming
//! a theory that itself came out of a transform stays sound. Output is
//! a deterministic function of the input.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::theory::{Atom, Literal, Rule, RuleKind, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    /// Superiority compilation requires strict labels to have been moved
    /// to their defeasible twins first.
    #[error("strict rule `{0}` appears in the superiority relation")]
    StrictLabelInSuperiority(String),
    /// Defeat of a strict rule cannot be compiled away: the rule itself
    /// stays in the output to carry definite provability, where nothing
    /// can beat it anymore.
    #[error("strict rule `{0}` is the inferior of a superiority pair, which the engine form cannot express")]
    StrictInferiorInSuperiority(String),
}

/// The base label of the defeasible twin added for a strict rule; an
/// `x` suffix is appended while the name is taken.
pub fn twin_label(label: &str) -> String {
    format!("{label}__dup")
}

/// Extends `base` with `x`s until it avoids everything in `taken`, then
/// records and returns the chosen name.
fn fresh(base: String, taken: &mut BTreeSet<String>) -> String {
    let mut name = base;
    while !taken.insert(name.clone()) {
        name.push('x');
    }
    name
}

/// Drops superiority pairs that can never influence any conclusion.
/// Superiority is consulted in exactly one place: when a strict or
/// defeasible rule overrides an attacker with the complementary head.
/// A pair is therefore inert, and dropped, when the two heads are not
/// complementary or when the superior rule is a defeater (defeaters
/// attack but never override).
pub fn prune_superiority(theory: &Theory) -> Theory {
    let kept = theory.superiority().iter().filter(|(sup, inf)| {
        let sup = theory.rule_by_label(sup).expect("validated label");
        let inf = theory.rule_by_label(inf).expect("validated label");
        *sup.head() == inf.head().complement() && sup.kind() != RuleKind::Defeater
    });
    Theory::new(
        theory.facts().iter().cloned(),
        theory.rules().to_vec(),
        kept.cloned(),
    )
    .expect("pruning preserves well-formedness")
}

/// Appends a defeasible twin `<label>__dup` for every strict rule, and
/// rewrites superiority pairs naming a strict rule to name the twin.
/// Strict rules then serve definite provability only, while defeasible
/// reasoning runs entirely on non-strict rules.
pub fn duplicate_strict(theory: &Theory) -> Theory {
    let mut taken: BTreeSet<String> = theory
        .rules()
        .iter()
        .map(|r| r.label().to_string())
        .collect();
    let mut twins: BTreeMap<String, String> = BTreeMap::new();
    let mut rules = theory.rules().to_vec();
    for rule in theory.rules().iter().filter(|r| r.is_strict()) {
        let twin = fresh(twin_label(rule.label()), &mut taken);
        twins.insert(rule.label().to_string(), twin.clone());
        rules.push(Rule::new(
            twin,
            RuleKind::Defeasible,
            rule.body().iter().cloned(),
            rule.head().clone(),
        ));
    }
    let relabel =
        |label: &String| -> String { twins.get(label).cloned().unwrap_or_else(|| label.clone()) };
    let superiority = theory
        .superiority()
        .iter()
        .map(|(sup, inf)| (relabel(sup), relabel(inf)));
    Theory::new(theory.facts().iter().cloned(), rules, superiority)
        .expect("twin labels are fresh and relabeling preserves acyclicity")
}

/// Compiles the superiority relation away. Strict rules and facts pass
/// through unchanged. Every non-strict rule is replaced by a gadget that
/// routes its conclusion through fresh marker atoms, and every
/// superiority pair becomes two rules that knock the weaker rule's
/// markers out while the stronger rule's stay standing:
///
/// * pair `(r1, r2)`: `~infp__r1 => infp__r2` and `~infm__r1 => infm__r2`;
/// * defeasible rule `r: B => p`: `B => ~infp__r`, `~infp__r => p`,
///   `B => ~infm__r`, `~infm__r => p`;
/// * defeater `r: B ~> p`: `B => ~infm__r`, `~infm__r ~> p`.
///
/// Generated labels are `<r1>__<r2>__s<k>` for pair rules and
/// `<r>__s<k>` for gadget rules, each extended with `x`s if the name is
/// taken. Rules appear in the order: strict rules, pair rules (pairs in
/// sorted order), gadgets (source order).
pub fn elim_sup(theory: &Theory) -> Result<Theory, TransformError> {
    for (sup, inf) in theory.superiority() {
        for label in [sup, inf] {
            let rule = theory.rule_by_label(label).expect("validated label");
            if rule.is_strict() {
                return Err(TransformError::StrictLabelInSuperiority(label.clone()));
            }
        }
    }

    // Mint the marker atoms for every non-strict rule up front, in
    // source order, so pair rules and gadgets agree on them.
    let mut taken_atoms: BTreeSet<String> = theory
        .atoms()
        .iter()
        .map(|a| a.name().to_string())
        .collect();
    let mut support_markers: BTreeMap<String, Atom> = BTreeMap::new();
    let mut attack_markers: BTreeMap<String, Atom> = BTreeMap::new();
    for rule in theory.rules().iter().filter(|r| !r.is_strict()) {
        let label = rule.label();
        let support = fresh(format!("infp__{label}"), &mut taken_atoms);
        let attack = fresh(format!("infm__{label}"), &mut taken_atoms);
        let named = |name: String| Atom::named(name).expect("labels render as identifiers");
        support_markers.insert(label.to_string(), named(support));
        attack_markers.insert(label.to_string(), named(attack));
    }
    let support_marker = |label: &str| support_markers[label].clone();
    let attack_marker = |label: &str| attack_markers[label].clone();

    // Only labels that survive into the output count as taken; the
    // non-strict source rules are consumed by their gadgets.
    let mut taken_labels: BTreeSet<String> = theory
        .rules()
        .iter()
        .filter(|r| r.is_strict())
        .map(|r| r.label().to_string())
        .collect();
    let mut rules: Vec<Rule> = theory.rules().iter().filter(|r| r.is_strict()).cloned().collect();
    for (sup, inf) in theory.superiority() {
        rules.push(Rule::new(
            fresh(format!("{sup}__{inf}__s1"), &mut taken_labels),
            RuleKind::Defeasible,
            [Literal::neg(support_marker(sup))],
            Literal::pos(support_marker(inf)),
        ));
        rules.push(Rule::new(
            fresh(format!("{sup}__{inf}__s2"), &mut taken_labels),
            RuleKind::Defeasible,
            [Literal::neg(attack_marker(sup))],
            Literal::pos(attack_marker(inf)),
        ));
    }
    for rule in theory.rules() {
        let label = rule.label();
        let body = || rule.body().iter().cloned();
        let head = || rule.head().clone();
        match rule.kind() {
            RuleKind::Strict => {}
            RuleKind::Defeasible => {
                let support = Literal::neg(support_marker(label));
                let attack = Literal::neg(attack_marker(label));
                rules.push(Rule::new(
                    fresh(format!("{label}__s1"), &mut taken_labels),
                    RuleKind::Defeasible,
                    body(),
                    support.clone(),
                ));
                rules.push(Rule::new(
                    fresh(format!("{label}__s2"), &mut taken_labels),
                    RuleKind::Defeasible,
                    [support],
                    head(),
                ));
                rules.push(Rule::new(
                    fresh(format!("{label}__s3"), &mut taken_labels),
                    RuleKind::Defeasible,
                    body(),
                    attack.clone(),
                ));
                rules.push(Rule::new(
                    fresh(format!("{label}__s4"), &mut taken_labels),
                    RuleKind::Defeasible,
                    [attack],
                    head(),
                ));
            }
            RuleKind::Defeater => {
                let attack = Literal::neg(attack_marker(label));
                rules.push(Rule::new(
                    fresh(format!("{label}__s1"), &mut taken_labels),
                    RuleKind::Defeasible,
                    body(),
                    attack.clone(),
                ));
                rules.push(Rule::new(
                    fresh(format!("{label}__s2"), &mut taken_labels),
                    RuleKind::Defeater,
                    [attack],
                    head(),
                ));
            }
        }
    }
    Ok(Theory::new(theory.facts().iter().cloned(), rules, [])
        .expect("generated labels are distinct"))
}

/// The full pipeline into engine form: prune inert superiority pairs,
/// duplicate strict rules, then compile any remaining superiority away.
/// When pruning leaves no superiority at all, the compilation step is
/// skipped, so simple theories stay recognizable (only twins added).
///
/// A surviving pair may name a strict rule as its superior (the twin
/// takes over that role, and the twin overrides exactly when the strict
/// rule would have), but a strict rule in the inferior position is
/// rejected: see the module documentation.
pub fn to_engine_form(theory: &Theory) -> Result<Theory, TransformError> {
    let pruned = prune_superiority(theory);
    for (_, inf) in pruned.superiority() {
        let rule = pruned.rule_by_label(inf).expect("validated label");
        if rule.is_strict() {
            return Err(TransformError::StrictInferiorInSuperiority(inf.clone()));
        }
    }
    let duplicated = duplicate_strict(&pruned);
    if duplicated.superiority().is_empty() {
        Ok(duplicated)
    } else {
        Ok(elim_sup(&duplicated).expect("twins replaced strict labels in superiority"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conclusions::Tag;
    use crate::oracle::run_oracle;
    use crate::samples;
    use crate::text::{parse_theory, print_theory};

    fn pos(name: &str) -> Literal {
        Literal::pos(Atom::named(name).unwrap())
    }

    fn neg(name: &str) -> Literal {
        Literal::neg(Atom::named(name).unwrap())
    }

    #[test]
    fn prune_keeps_only_complementary_head_pairs() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let pruned = prune_superiority(&theory);
        let pairs: Vec<(String, String)> = pruned.superiority().iter().cloned().collect();
        assert_eq!(
            pairs,
            [
                ("r4e".to_string(), "r2e".to_string()),
                ("r4t".to_string(), "r2t".to_string())
            ]
        );
        assert_eq!(pruned.rules(), theory.rules());
        assert_eq!(pruned.facts(), theory.facts());
    }

    #[test]
    fn prune_drops_same_head_pairs() {
        let theory = parse_theory("r1: => p.\nr2: => p.\nr1 > r2.\n").unwrap();
        assert!(prune_superiority(&theory).superiority().is_empty());
    }

    #[test]
    fn prune_is_identity_without_superiority() {
        let theory = parse_theory("a.\nr1: a => b.\n").unwrap();
        assert_eq!(prune_superiority(&theory), theory);
    }

    #[test]
    fn duplication_appends_defeasible_twins() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let doubled = duplicate_strict(&theory);
        assert_eq!(doubled.rules().len(), theory.rules().len() + 2);
        let twin = doubled.rule_by_label("r1e__dup").unwrap();
        assert_eq!(twin.kind(), RuleKind::Defeasible);
        assert_eq!(twin.head(), &pos("bird_ethel"));
        assert_eq!(
            twin.body(),
            theory.rule_by_label("r1e").unwrap().body()
        );
        // Twins follow the original rules.
        assert_eq!(doubled.rules()[9].label(), "r1e__dup");
        assert_eq!(doubled.rules()[10].label(), "r1t__dup");
    }

    #[test]
    fn duplication_moves_superiority_to_twins() {
        let theory = parse_theory("s: a -> p.\nd: b => ~p.\nd > s.\n").unwrap();
        let doubled = duplicate_strict(&theory);
        let pairs: Vec<(String, String)> = doubled.superiority().iter().cloned().collect();
        assert_eq!(pairs, [("d".to_string(), "s__dup".to_string())]);
    }

    #[test]
    fn duplication_without_strict_rules_is_identity() {
        let theory = parse_theory(samples::INTERFERENCE).unwrap();
        assert_eq!(duplicate_strict(&theory), theory);
    }

    #[test]
    fn superiority_compilation_matches_the_ten_rule_expansion() {
        let theory = parse_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n").unwrap();
        let out = elim_sup(&theory).unwrap();
        assert!(out.superiority().is_empty());
        let rendered: Vec<String> = out
            .rules()
            .iter()
            .map(|r| {
                let body: Vec<String> = r.body().iter().map(|l| l.rendered()).collect();
                format!(
                    "{}: {} {} {}",
                    r.label(),
                    body.join(", "),
                    r.kind().arrow(),
                    r.head().rendered()
                )
            })
            .collect();
        assert_eq!(
            rendered,
            [
                "r1__r2__s1: ~infp__r1 => infp__r2",
                "r1__r2__s2: ~infm__r1 => infm__r2",
                "r1__s1:  => ~infp__r1",
                "r1__s2: ~infp__r1 => p",
                "r1__s3:  => ~infm__r1",
                "r1__s4: ~infm__r1 => p",
                "r2__s1:  => ~infp__r2",
                "r2__s2: ~infp__r2 => ~p",
                "r2__s3:  => ~infm__r2",
                "r2__s4: ~infm__r2 => ~p",
            ]
        );
    }

    #[test]
    fn compiled_superiority_decides_p_like_the_source() {
        let theory = parse_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n").unwrap();
        let out = elim_sup(&theory).unwrap();
        let (source, _) = run_oracle(&theory, false);
        let (compiled, _) = run_oracle(&out, false);
        let restricted = compiled.restrict(&theory.atoms());
        assert!(restricted.contains(Tag::PlusPartial, &pos("p")));
        assert!(restricted.contains(Tag::MinusPartial, &neg("p")));
        assert_eq!(restricted, source);
    }

    #[test]
    fn defeaters_get_the_two_rule_gadget() {
        let theory = parse_theory("r1: => p.\nr2: a ~> ~p.\nr1 > r2.\n").unwrap();
        let out = elim_sup(&theory).unwrap();
        let gadget = out.rule_by_label("r2__s2").unwrap();
        assert_eq!(gadget.kind(), RuleKind::Defeater);
        assert_eq!(gadget.head(), &neg("p"));
        assert_eq!(
            out.rule_by_label("r2__s1").unwrap().body(),
            &[pos("a")].into_iter().collect()
        );
        // No support-path gadget for a defeater.
        assert!(out.rule_by_label("r2__s3").is_none());
        assert!(out.rule_by_label("r2__s4").is_none());
    }

    #[test]
    fn strict_label_in_superiority_rejected() {
        let theory = parse_theory("s: a -> p.\nd: b => ~p.\nd > s.\n").unwrap();
        assert_eq!(
            elim_sup(&theory).unwrap_err(),
            TransformError::StrictLabelInSuperiority("s".to_string())
        );
    }

    #[test]
    fn compilation_without_nonstrict_rules_keeps_the_theory() {
        let theory = parse_theory("a.\nr1: a -> b.\n").unwrap();
        assert_eq!(elim_sup(&theory).unwrap(), theory);
    }

    #[test]
    fn engine_form_of_plain_theory_only_adds_twins() {
        let theory = parse_theory("a.\nr1: a -> b.\nr2: b => c.\n").unwrap();
        let engine = to_engine_form(&theory).unwrap();
        assert_eq!(engine.rules().len(), 3);
        assert!(engine.rule_by_label("r1__dup").is_some());
        assert!(engine.superiority().is_empty());
    }

    #[test]
    fn engine_form_compiles_effective_superiority() {
        let theory = parse_theory(samples::BROKEN_WING).unwrap();
        let engine = to_engine_form(&theory).unwrap();
        assert!(engine.superiority().is_empty());
        assert!(engine.rule_by_label("r2__r__s1").is_some());
        assert!(engine.rule_by_label("r__s4").is_some());
    }

    #[test]
    fn engine_form_skips_compilation_for_inert_superiority() {
        let theory = parse_theory("r1: => p.\nr2: => p.\nr1 > r2.\n").unwrap();
        let engine = to_engine_form(&theory).unwrap();
        // The pair is inert, so no marker gadgets appear.
        assert_eq!(engine.rules().len(), 2);
        assert!(engine.superiority().is_empty());
    }

    #[test]
    fn engine_form_output_prints_and_stays_deterministic() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let a = print_theory(&to_engine_form(&theory).unwrap());
        let b = print_theory(&to_engine_form(&theory).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("infp__"));
    }

    #[test]
    fn engine_form_preserves_conclusions_on_samples() {
        for source in [
            samples::DBIRD,
            samples::PLATYPUS,
            samples::BROKEN_WING,
            samples::INTERFERENCE,
            samples::LOOP,
        ] {
            let theory = parse_theory(source).unwrap();
            let engine = to_engine_form(&theory).unwrap();
            let (want, _) = run_oracle(&theory, false);
            let (got, _) = run_oracle(&engine, false);
            assert_eq!(
                got.restrict(&theory.atoms()),
                want,
                "conclusions changed for {source:?}"
            );
        }
    }

    #[test]
    fn prune_drops_defeater_superiors() {
        let theory = parse_theory("r1: => x.\nr2: ~> ~x.\nr3: ~> x.\nr3 > r2.\n").unwrap();
        assert!(prune_superiority(&theory).superiority().is_empty());
    }

    #[test]
    fn defeater_superiors_never_override() {
        // The superior defeater lends x no protection: the attacking
        // defeater stands, so x stays defeasibly unprovable, before and
        // after the pipeline.
        let theory = parse_theory("r1: => x.\nr2: ~> ~x.\nr3: ~> x.\nr3 > r2.\n").unwrap();
        let engine = to_engine_form(&theory).unwrap();
        assert!(engine.superiority().is_empty());
        let (want, _) = run_oracle(&theory, false);
        assert!(want.contains(Tag::MinusPartial, &pos("x")));
        let (got, _) = run_oracle(&engine, false);
        assert_eq!(got.restrict(&theory.atoms()), want);
    }

    #[test]
    fn strict_inferiors_are_rejected() {
        // The source proves +d q: the strict rule s attacks q with a
        // defeasibly provable body, and t overrides it. After
        // compilation s would survive verbatim with nothing able to
        // beat it, so the pipeline refuses.
        let theory = parse_theory("ra: => a.\ns: a -> ~q.\nt: => q.\nt > s.\n").unwrap();
        let (want, _) = run_oracle(&theory, false);
        assert!(want.contains(Tag::PlusPartial, &pos("q")));
        assert_eq!(
            to_engine_form(&theory).unwrap_err(),
            TransformError::StrictInferiorInSuperiority("s".to_string())
        );
    }

    #[test]
    fn strict_superiors_override_through_their_twins() {
        let theory = parse_theory("ra: => a.\ns: a -> q.\nd: => ~q.\ns > d.\n").unwrap();
        let engine = to_engine_form(&theory).unwrap();
        assert!(engine.rule_by_label("s__dup__d__s1").is_some());
        let (want, _) = run_oracle(&theory, false);
        assert!(want.contains(Tag::PlusPartial, &pos("q")));
        assert!(want.contains(Tag::MinusPartial, &neg("q")));
        let (got, _) = run_oracle(&engine, false);
        assert_eq!(got.restrict(&theory.atoms()), want);
    }

    #[test]
    fn minted_names_dodge_existing_ones() {
        // The input already owns the twin label and both marker atoms
        // that compilation would want; the minted names grow an `x` and
        // the verdicts still match the source.
        let source = "\
            s: a -> p.\n\
            s__dup: => a.\n\
            r2: infp__s__dup => ~p.\n\
            infm__r2.\n\
            s > r2.\n";
        let theory = parse_theory(source).unwrap();
        let duplicated = duplicate_strict(&prune_superiority(&theory));
        assert!(duplicated.rule_by_label("s__dupx").is_some());
        assert!(duplicated
            .superiority()
            .contains(&("s__dupx".to_string(), "r2".to_string())));
        let engine = to_engine_form(&theory).unwrap();
        assert!(engine.rule_by_label("s__dupx__s1").is_some());
        let printed = print_theory(&engine);
        assert!(printed.contains("infp__s__dupx"));
        assert!(printed.contains("infm__r2x"));
        let (want, _) = run_oracle(&theory, false);
        let (got, _) = run_oracle(&engine, false);
        assert_eq!(got.restrict(&theory.atoms()), want);
    }

    #[test]
    fn compiled_output_recompiles_soundly() {
        let theory = parse_theory(samples::DBIRD).unwrap();
        let once = to_engine_form(&theory).unwrap();
        let twice = to_engine_form(&parse_theory(&print_theory(&once)).unwrap()).unwrap();
        let (want, _) = run_oracle(&theory, false);
        let (got, _) = run_oracle(&twice, false);
        assert_eq!(got.restrict(&theory.atoms()), want);
    }

    #[test]
    fn engine_form_size_is_linearly_bounded() {
        for source in [
            samples::DBIRD,
            samples::PLATYPUS,
            samples::BROKEN_WING,
            samples::INTERFERENCE,
            samples::LOOP,
        ] {
            let theory = parse_theory(source).unwrap();
            let engine = to_engine_form(&theory).unwrap();
            assert!(
                engine.symbol_count() <= 8 * theory.symbol_count(),
                "blowup exceeded 8x for {source:?}"
            );
        }
    }
}
