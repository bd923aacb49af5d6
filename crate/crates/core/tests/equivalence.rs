//! Cross-engine differential checks and property-based invariants.
//!
//! Fixed samples, the named generator families, and a seeded corpus are
//! pushed through all three evaluators (the fixpoint oracle on the
//! source theory, the transition interpreter and the linear engine on
//! the engine form), and every run must land on the same external
//! conclusions. The property tests then pin what each run must satisfy
//! on its own: coherent and subsumption-closed conclusion sets, queue
//! discipline independence, the linear work bounds, and a faithful text
//! round trip.

use proptest::prelude::*;

use dl_core::generate::{self, random_corpus_theory};
use dl_core::{
    compare_engines, corpus_disagreements, parse_theory, print_theory, run_linear,
    run_linear_with_mode, run_oracle, samples, to_engine_form, QueueMode, Theory,
};

fn assert_agreement(theory: &Theory, what: &str) {
    let report = compare_engines(theory).unwrap_or_else(|e| {
        panic!("{what}: no engine form: {e}");
    });
    assert!(report.is_agreement(), "{what} split the engines: {report:?}");
}

#[test]
fn fixed_samples_agree() {
    for (name, source) in [
        ("dbird", samples::DBIRD),
        ("platypus", samples::PLATYPUS),
        ("broken_wing", samples::BROKEN_WING),
        ("interference", samples::INTERFERENCE),
        ("loop", samples::LOOP),
    ] {
        assert_agreement(&parse_theory(source).unwrap(), name);
    }
}

#[test]
fn named_families_agree() {
    assert_agreement(&generate::chain(40), "chain(40)");
    assert_agreement(&generate::circle(9), "circle(9)");
    assert_agreement(&generate::tree(27, 3), "tree(27, 3)");
    assert_agreement(&generate::teams(3), "teams(3)");
    assert_agreement(&generate::dag(60, 3, 7), "dag(60, 3, 7)");
    assert_agreement(&generate::random(50, 11), "random(50, 11)");
}

#[test]
fn two_hundred_corpus_seeds_agree() {
    let splits = corpus_disagreements(0..200);
    assert!(
        splits.is_empty(),
        "corpus seeds diverged: {:?}",
        splits
            .iter()
            .map(|(seed, ds)| (*seed, ds.iter().map(|d| d.rendered()).collect::<Vec<_>>()))
            .collect::<Vec<_>>()
    );
}

/// The transformation's own contract, checked with the oracle on both
/// sides: compiling to engine form must not change any external verdict
/// over the source alphabet. This is the middle term between the source
/// oracle and the engine runs, and the first place a bad compilation
/// shows up.
#[test]
fn engine_form_preserves_oracle_verdicts() {
    for seed in 0..200u64 {
        let theory = random_corpus_theory(seed);
        let atoms = theory.atoms();
        let (source, _) = run_oracle(&theory, false);
        let engine_form = to_engine_form(&theory).unwrap();
        let (compiled, _) = run_oracle(&engine_form, false);
        assert_eq!(
            source.external_only().restrict(&atoms),
            compiled.external_only().restrict(&atoms),
            "seed {seed}: compilation changed the oracle's verdicts"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corpus_theories_agree(seed in 0u64..20_000) {
        let theory = random_corpus_theory(seed);
        let report = compare_engines(&theory).unwrap();
        prop_assert!(report.is_agreement(), "seed {seed}: {report:?}");
    }

    #[test]
    fn conclusions_cohere_and_subsume(seed in 0u64..20_000) {
        let theory = random_corpus_theory(seed);
        let (oracle_set, _) = run_oracle(&theory, false);
        prop_assert!(oracle_set.check_coherence().is_ok());
        prop_assert!(oracle_set.check_subsumption().is_ok());

        let run = run_linear(&to_engine_form(&theory).unwrap()).unwrap();
        prop_assert!(run.conclusions.check_coherence().is_ok());
        prop_assert!(run.conclusions.check_subsumption().is_ok());
    }

    #[test]
    fn queue_and_stack_reach_the_same_conclusions(seed in 0u64..20_000) {
        let engine_form = to_engine_form(&random_corpus_theory(seed)).unwrap();
        let fifo = run_linear_with_mode(&engine_form, QueueMode::Fifo).unwrap();
        let lifo = run_linear_with_mode(&engine_form, QueueMode::Lifo).unwrap();
        prop_assert_eq!(fifo.conclusions, lifo.conclusions);
        prop_assert_eq!(fifo.residue, lifo.residue);
    }

    #[test]
    fn work_counters_stay_linear(seed in 0u64..20_000) {
        let engine_form = to_engine_form(&random_corpus_theory(seed)).unwrap();
        let stats = run_linear(&engine_form).unwrap().stats;
        prop_assert!(stats.occurrence_deletions <= stats.initial_occurrences);
        prop_assert!(stats.rule_deletions <= stats.rules);
        prop_assert_eq!(stats.dequeued, stats.enqueued);
        prop_assert!(
            stats.enqueued <= 8 * stats.universe,
            "enqueued {} exceeds 8 x {} literals",
            stats.enqueued,
            stats.universe
        );
    }

    #[test]
    fn printed_theories_parse_back(seed in 0u64..20_000) {
        let theory = random_corpus_theory(seed);
        let reparsed = parse_theory(&print_theory(&theory)).unwrap();
        prop_assert_eq!(theory, reparsed);
    }

    #[test]
    fn engine_forms_round_trip_too(seed in 0u64..5_000) {
        let engine_form = to_engine_form(&random_corpus_theory(seed)).unwrap();
        let reparsed = parse_theory(&print_theory(&engine_form)).unwrap();
        prop_assert_eq!(engine_form, reparsed);
    }
}
