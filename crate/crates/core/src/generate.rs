//! Parameterized theory families for tests and benchmarks.
//!
//! Every generator is deterministic in its parameters (the seeded ones
//! via a counter-based RNG), and every generated theory satisfies the
//! structural validity rules: unique labels, known labels in the
//! superiority relation, and acyclic superiority.
//!
//! * [`chain`]: one defeasible axiom and a line of single-antecedent
//!   defeasible rules; the canonical linear-scaling workload.
//! * [`circle`]: strict rules around a cycle with no facts, so every
//!   positive literal stays undetermined and the run deletes nothing.
//! * [`tree`]: a complete k-ary strict proof tree over leaf facts.
//! * [`teams`]: recursive team defeat; every goal is attacked by two
//!   rules, each beaten by a superior supporter.
//! * [`dag`]: seeded layered graph with shared subgoals, mixed rule
//!   kinds, and bounded body width.
//! * [`random`]: seeded unrestricted mix, cycles and all, with a
//!   superiority relation kept acyclic by orienting pairs one way.
//! * [`random_corpus_theory`]: small adversarial theories for engine
//!   cross-checking; tuned for coverage, frozen for reproducibility.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::theory::{Atom, Literal, Rule, RuleKind, Theory};

fn atom(name: String) -> Atom {
    Atom::named(name).expect("generated atom names are valid")
}

fn pos(name: String) -> Literal {
    Literal::pos(atom(name))
}

/// `n + 1` atoms `a0 .. a<n>`: a defeasible axiom for `a0` and one rule
/// `a<i> => a<i+1>` per link. Symbol count `2n + 1`; every atom settles
/// `+∂`, so a run touches every occurrence exactly once.
pub fn chain(n: usize) -> Theory {
    let mut rules = Vec::with_capacity(n + 1);
    rules.push(Rule::new(
        "r0",
        RuleKind::Defeasible,
        [],
        pos("a0".to_string()),
    ));
    for i in 0..n {
        rules.push(Rule::new(
            format!("r{}", i + 1),
            RuleKind::Defeasible,
            [pos(format!("a{i}"))],
            pos(format!("a{}", i + 1)),
        ));
    }
    Theory::new([], rules, []).expect("chain labels are unique")
}

/// `n` atoms strictly proving each other around a cycle, with no facts:
/// nothing is derivable and nothing is refutable, so the run leaves the
/// whole theory standing. The worst case for settling, the best case
/// for deletion counters.
pub fn circle(n: usize) -> Theory {
    assert!(n >= 1, "a circle needs at least one rule");
    let rules = (0..n)
        .map(|i| {
            Rule::new(
                format!("r{i}"),
                RuleKind::Strict,
                [pos(format!("a{i}"))],
                pos(format!("a{}", (i + 1) % n)),
            )
        })
        .collect();
    Theory::new([], rules, []).expect("circle labels are unique")
}

/// A complete proof tree: `leaves` facts at the bottom, strict rules
/// joining up to `branching` children into each parent, one root at the
/// top. Everything is definitely provable.
pub fn tree(leaves: usize, branching: usize) -> Theory {
    assert!(leaves >= 1, "a tree needs at least one leaf");
    assert!(branching >= 2, "joining fewer than two children never terminates");
    let facts: Vec<Literal> = (0..leaves).map(|i| pos(format!("t0_{i}"))).collect();
    let mut rules = Vec::new();
    let mut level: Vec<Literal> = facts.clone();
    let mut depth = 0;
    while level.len() > 1 {
        depth += 1;
        let mut next = Vec::with_capacity(level.len().div_ceil(branching));
        for (i, group) in level.chunks(branching).enumerate() {
            let parent = pos(format!("t{depth}_{i}"));
            rules.push(Rule::new(
                format!("r{}", rules.len()),
                RuleKind::Strict,
                group.iter().cloned(),
                parent.clone(),
            ));
            next.push(parent);
        }
        level = next;
    }
    Theory::new(facts, rules, []).expect("tree labels are unique")
}

/// Recursive team defeat of the given depth. The root goal `q` is
/// supported by two defeasible rules and attacked by two others; each
/// attacker is beaten by one distinct supporter, and all four premises
/// are goals one level down, built the same way. At depth zero a goal
/// is simply presumed. Every goal comes out `+∂`.
pub fn teams(depth: usize) -> Theory {
    let mut rules = Vec::new();
    let mut superiority = Vec::new();
    let mut worklist = vec![("q".to_string(), depth)];
    while let Some((goal, d)) = worklist.pop() {
        let head = pos(goal.clone());
        if d == 0 {
            rules.push(Rule::new(
                format!("r_{goal}_0"),
                RuleKind::Defeasible,
                [],
                head,
            ));
            continue;
        }
        for k in 1..=4u8 {
            let premise = format!("{goal}{k}");
            let rule_head = if k <= 2 { head.clone() } else { head.complement() };
            rules.push(Rule::new(
                format!("r_{goal}_{k}"),
                RuleKind::Defeasible,
                [pos(premise.clone())],
                rule_head,
            ));
            worklist.push((premise, d - 1));
        }
        superiority.push((format!("r_{goal}_1"), format!("r_{goal}_3")));
        superiority.push((format!("r_{goal}_2"), format!("r_{goal}_4")));
    }
    Theory::new([], rules, superiority).expect("team labels are unique and acyclic")
}

/// A layered acyclic graph: `size` rules over `size + 2` atoms, each
/// body drawing up to `branching` distinct literals from strictly
/// earlier atoms, with a sprinkling of strict rules, defeaters, and
/// negative heads. No superiority.
pub fn dag(size: usize, branching: usize, seed: u64) -> Theory {
    assert!(branching >= 1, "bodies need at least one slot");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| format!("d{i}");
    let facts = [pos(name(0)), pos(name(1))];
    let mut rules = Vec::with_capacity(size);
    for i in 0..size {
        let reach = i + 2;
        let width = rng.gen_range(1..=branching.min(reach));
        let mut picks: Vec<usize> = (0..reach).collect();
        picks.shuffle(&mut rng);
        let body: Vec<Literal> = picks[..width]
            .iter()
            .map(|&j| Literal::new(atom(name(j)), rng.gen_range(0..8) != 0))
            .collect();
        let head = Literal::new(atom(name(reach)), rng.gen_range(0..6) != 0);
        let kind = match rng.gen_range(0..20) {
            0..=3 => RuleKind::Strict,
            4..=16 => RuleKind::Defeasible,
            _ => RuleKind::Defeater,
        };
        rules.push(Rule::new(format!("r{i}"), kind, body, head));
    }
    Theory::new(facts, rules, []).expect("dag labels are unique")
}

/// An unrestricted seeded mix: arbitrary bodies (cycles included), all
/// three rule kinds, a few facts, and a superiority relation over
/// complementary-head rule pairs, oriented from lower to higher rule
/// index so it cannot cycle.
pub fn random(size: usize, seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = (size / 3).clamp(3, 60);
    let name = |i: usize| format!("x{i}");
    let lit = |rng: &mut ChaCha8Rng| {
        Literal::new(atom(name(rng.gen_range(0..atoms))), rng.gen_bool(0.7))
    };
    let facts: Vec<Literal> = (0..atoms.div_ceil(6)).map(|_| lit(&mut rng)).collect();
    let mut rules = Vec::with_capacity(size);
    for i in 0..size {
        let kind = match rng.gen_range(0..20) {
            0..=4 => RuleKind::Strict,
            5..=15 => RuleKind::Defeasible,
            _ => RuleKind::Defeater,
        };
        let body: Vec<Literal> = (0..rng.gen_range(0..=3)).map(|_| lit(&mut rng)).collect();
        rules.push(Rule::new(format!("g{i}"), kind, body, lit(&mut rng)));
    }
    let superiority = complementary_pairs(&rules, size / 5, &mut rng);
    Theory::new(facts, rules, superiority).expect("random labels are unique and acyclic")
}

/// Up to `limit` superiority pairs between rules with complementary
/// heads, each oriented from the lower-index rule to the higher, which
/// keeps the relation acyclic regardless of how many pairs are drawn.
fn complementary_pairs(
    rules: &[Rule],
    limit: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, String)> {
    let mut candidates = Vec::new();
    for (i, superior) in rules.iter().enumerate() {
        for inferior in rules.iter().skip(i + 1) {
            // Strict rules cannot be demoted, so pairs that place one in
            // the inferior position fall outside the engine fragment.
            if inferior.kind() == RuleKind::Strict {
                continue;
            }
            if superior.head() == &inferior.head().complement() {
                candidates.push((
                    superior.label().to_string(),
                    inferior.label().to_string(),
                ));
            }
        }
    }
    candidates.shuffle(rng);
    candidates.truncate(limit);
    candidates
}

/// A small adversarial theory for engine cross-checking: up to a dozen
/// atoms, up to forty rules of all kinds with short bodies, empty
/// bodies and contradictory facts included, and a handful of acyclic
/// superiority pairs. Frozen: differential corpora index into this
/// family by seed, so its output per seed must never change.
pub fn random_corpus_theory(seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(1..=12usize);
    let name = |i: usize| format!("x{i}");
    let lit = |rng: &mut ChaCha8Rng| {
        Literal::new(atom(name(rng.gen_range(0..atoms))), rng.gen_bool(0.6))
    };
    let mut facts = Vec::new();
    for i in 0..atoms {
        if rng.gen_bool(0.15) {
            facts.push(Literal::new(atom(name(i)), rng.gen_bool(0.7)));
        }
    }
    let rule_count = rng.gen_range(0..=40usize);
    let mut rules = Vec::with_capacity(rule_count);
    for i in 0..rule_count {
        let kind = match rng.gen_range(0..20) {
            0..=4 => RuleKind::Strict,
            5..=15 => RuleKind::Defeasible,
            _ => RuleKind::Defeater,
        };
        let body: Vec<Literal> = (0..rng.gen_range(0..=3)).map(|_| lit(&mut rng)).collect();
        rules.push(Rule::new(format!("g{i}"), kind, body, lit(&mut rng)));
    }
    let superiority = complementary_pairs(&rules, rng.gen_range(0..=8), &mut rng);
    Theory::new(facts, rules, superiority).expect("corpus labels are unique and acyclic")
}

/// Seeded theory in the shape `dl gen` exposes; sizes are the family
/// parameter, not the symbol count.
pub fn by_kind(kind: &str, size: usize, branching: usize, seed: u64) -> Option<Theory> {
    Some(match kind {
        "chain" => chain(size),
        "circle" => circle(size),
        "tree" => tree(size, branching),
        "teams" => teams(size),
        "dag" => dag(size, branching, seed),
        "random" => random(size, seed),
        _ => return None,
    })
}

/// Chain length whose [`chain`] theory has at least `symbols` symbols.
pub fn chain_links_for_symbols(symbols: usize) -> usize {
    symbols.saturating_sub(1).div_ceil(2)
}
