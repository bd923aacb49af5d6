//! Wall-clock benchmark of the linear engine over generated families,
//! built to make the linearity claim checkable: doubling the input size
//! should roughly double the median run time.
//!
//! Preparing a theory (generating it and rewriting it into engine form)
//! is timed separately and excluded from the measured run, which covers
//! building the occurrence index, seeding, and running to quiescence.

use std::time::Instant;

use clap::Args;
use serde_json::json;

use dl_core::{generate, to_engine_form, Engine, QueueMode, Theory};

use crate::Failure;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated families to measure.
    #[arg(long, value_delimiter = ',', default_value = "chain")]
    kinds: Vec<String>,
    /// Comma-separated family parameters, in increasing order.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "8192,16384,32768,65536,131072"
    )]
    sizes: Vec<usize>,
    /// Timed runs per (kind, size); medians are taken over these.
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Fan-in for tree and dag.
    #[arg(long, default_value_t = 2)]
    branching: usize,
    /// RNG seed for the seeded families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit one machine-readable JSON document instead of a table.
    #[arg(long)]
    json: bool,
}

/// One measured (kind, size) cell.
pub struct BenchEntry {
    pub kind: String,
    pub size: usize,
    pub symbols: usize,
    pub rules: usize,
    pub prepare_ms: f64,
    pub runs_ms: Vec<f64>,
    pub median_ms: f64,
    pub peak_occurrences: usize,
    pub conclusions: usize,
}

/// Median-to-median ratio between consecutive sizes of one family.
pub struct BenchRatio {
    pub kind: String,
    pub from_size: usize,
    pub to_size: usize,
    pub ratio: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Runs the engine once and reports the elapsed milliseconds together
/// with the work counters and external conclusion count.
pub fn timed_run(
    engine_form: &Theory,
    atoms: &std::collections::BTreeSet<dl_core::Atom>,
) -> (f64, usize, usize) {
    let started = Instant::now();
    let mut engine =
        Engine::build_with_mode(engine_form, QueueMode::Fifo).expect("engine form expected");
    engine.initialize();
    engine.run();
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let peak = engine.stats().initial_occurrences;
    let conclusions = engine
        .conclusions()
        .external_only()
        .restrict(atoms)
        .len();
    (elapsed_ms, peak, conclusions)
}

/// Measures every (kind, size) cell sequentially; repeats of one cell
/// run back to back for timing integrity.
pub fn measure(
    kinds: &[String],
    sizes: &[usize],
    repeat: usize,
    branching: usize,
    seed: u64,
) -> Result<(Vec<BenchEntry>, Vec<BenchRatio>), Failure> {
    if repeat == 0 {
        return Err(Failure::new(1, "--repeat must be at least 1"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::new(1, "--sizes must be strictly increasing"));
    }
    let mut entries = Vec::new();
    for kind in kinds {
        for &size in sizes {
            let prepared = Instant::now();
            let theory = generate::by_kind(kind, size, branching, seed).ok_or_else(|| {
                Failure::new(
                    1,
                    format!(
                        "unknown family `{kind}` (expected chain, circle, tree, teams, dag, or random)"
                    ),
                )
            })?;
            let engine_form = to_engine_form(&theory)
                .map_err(|e| Failure::new(3, format!("{kind} {size}: {e}")))?;
            let atoms = theory.atoms();
            let prepare_ms = prepared.elapsed().as_secs_f64() * 1e3;

            let mut runs_ms = Vec::with_capacity(repeat);
            let mut peak = 0;
            let mut conclusions = 0;
            for _ in 0..repeat {
                let (ms, run_peak, run_conclusions) = timed_run(&engine_form, &atoms);
                runs_ms.push(ms);
                peak = run_peak;
                conclusions = run_conclusions;
            }
            entries.push(BenchEntry {
                kind: kind.clone(),
                size,
                symbols: theory.symbol_count(),
                rules: theory.rules().len(),
                prepare_ms,
                median_ms: median(&runs_ms),
                runs_ms,
                peak_occurrences: peak,
                conclusions,
            });
        }
    }

    let mut ratios = Vec::new();
    for kind in kinds {
        let family: Vec<&BenchEntry> = entries.iter().filter(|e| &e.kind == kind).collect();
        for pair in family.windows(2) {
            ratios.push(BenchRatio {
                kind: kind.clone(),
                from_size: pair[0].size,
                to_size: pair[1].size,
                ratio: pair[1].median_ms / pair[0].median_ms,
            });
        }
    }
    Ok((entries, ratios))
}

fn render_json(entries: &[BenchEntry], ratios: &[BenchRatio], repeat: usize) -> String {
    let doc = json!({
        "schema": "dl-bench/1",
        "repeat": repeat,
        "entries": entries.iter().map(|e| json!({
            "kind": e.kind,
            "size": e.size,
            "symbols": e.symbols,
            "rules": e.rules,
            "prepare_ms": e.prepare_ms,
            "runs_ms": e.runs_ms,
            "median_ms": e.median_ms,
            "peak_occurrences": e.peak_occurrences,
            "conclusions": e.conclusions,
        })).collect::<Vec<_>>(),
        "ratios": ratios.iter().map(|r| json!({
            "kind": r.kind,
            "from_size": r.from_size,
            "to_size": r.to_size,
            "ratio": r.ratio,
        })).collect::<Vec<_>>(),
    });
    format!("{doc:#}\n")
}

fn render_table(entries: &[BenchEntry], ratios: &[BenchRatio]) -> String {
    let mut out = String::new();
    out.push_str("kind      size      symbols     median_ms  peak_occ    conclusions  prepare_ms\n");
    for e in entries {
        out.push_str(&format!(
            "{:<8}  {:<8}  {:<10}  {:>9.3}  {:<10}  {:<11}  {:>10.3}\n",
            e.kind, e.size, e.symbols, e.median_ms, e.peak_occurrences, e.conclusions, e.prepare_ms
        ));
    }
    for r in ratios {
        out.push_str(&format!(
            "{} {} -> {}: x{:.2}\n",
            r.kind, r.from_size, r.to_size, r.ratio
        ));
    }
    out
}

pub fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let (entries, ratios) = measure(
        &args.kinds,
        &args.sizes,
        args.repeat,
        args.branching,
        args.seed,
    )?;
    let rendered = if args.json {
        render_json(&entries, &ratios, args.repeat)
    } else {
        render_table(&entries, &ratios)
    };
    print!("{rendered}");
    Ok(())
}
