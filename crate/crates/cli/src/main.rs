//! The `dl` command line: compute tagged conclusions for theory files,
//! rewrite theories toward the linear engine's input fragment, generate
//! benchmark families, time the engine, and cross-check the three
//! evaluators against each other.
//!
//! Exit codes: 0 success, 1 usage or I/O problems, 2 syntax errors in a
//! theory file, 3 well-formedness or transformation rejections, 4 the
//! evaluators disagree.

mod bench;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use dl_core::transform::{duplicate_strict, elim_sup, prune_superiority};
use dl_core::{
    compare_engines, corpus_disagreements, generate, parse_theory, print_conclusions,
    print_theory, run_linear, run_oracle, to_engine_form, Atom, ConclusionSet, DiffReport,
    ParseErrorKind, TaggedConclusion, Theory,
};

#[derive(Parser)]
#[command(name = "dl", version, about = "Defeasible logic engines and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the tagged conclusions of a theory file.
    Infer(InferArgs),
    /// Rewrite a theory file and print the result.
    Transform(TransformArgs),
    /// Parse and validate a theory file.
    Check {
        /// Theory file to validate.
        file: PathBuf,
    },
    /// Generate a theory from a named family.
    Gen(GenArgs),
    /// Time the linear engine across generated families.
    Bench(bench::BenchArgs),
    /// Run all three evaluators and compare their verdicts.
    Diff(DiffArgs),
}

#[derive(Args)]
struct InferArgs {
    /// Theory file to evaluate.
    file: PathBuf,
    /// Evaluator to run.
    #[arg(long, value_enum, default_value_t = EngineChoice::Linear)]
    engine: EngineChoice,
    /// Also print a `?D`/`?d` line for each undetermined literal.
    #[arg(long)]
    all: bool,
    /// Include the auxiliary support and attack tags.
    #[arg(long)]
    extended: bool,
    /// Print the simplified rules left when the engine stops (linear only).
    #[arg(long)]
    residue: bool,
    /// Print work counters (linear only).
    #[arg(long)]
    stats: bool,
    /// Only report conclusions about these comma-separated atoms.
    #[arg(long, value_delimiter = ',')]
    queries: Vec<String>,
    /// Print the conclusions again as numbered lines in derivation order.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    /// Occurrence-list engine on the engine form of the theory.
    Linear,
    /// Small-step interpreter on the engine form of the theory.
    Transition,
    /// Proof-condition fixpoint, straight on the source theory.
    Oracle,
}

#[derive(Args)]
struct TransformArgs {
    /// Theory file to rewrite.
    file: PathBuf,
    /// Rewriting to apply.
    #[arg(long, value_enum, default_value_t = Stage::Engine)]
    stage: Stage,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    /// Drop superiority pairs that cannot influence any conclusion.
    Prune,
    /// Add a defeasible twin for every strict rule.
    Dup,
    /// Compile the superiority relation into marker-atom gadgets.
    Nosup,
    /// The full pipeline the engines run on: prune, duplicate, and
    /// compile superiority away if any remains.
    Engine,
}

#[derive(Args)]
struct GenArgs {
    /// Family: chain, circle, tree, teams, dag, or random.
    kind: String,
    /// Family parameter: links, cycle length, leaves, depth, or rules.
    #[arg(long)]
    size: usize,
    /// RNG seed for the seeded families (dag, random).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fan-in for tree and dag.
    #[arg(long, default_value_t = 2)]
    branching: usize,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    /// Theory file to compare the evaluators on.
    file: Option<PathBuf>,
    /// Compare on this many seeded corpus theories instead of a file.
    #[arg(long, conflicts_with = "file", value_name = "N")]
    seed_corpus: Option<u64>,
}

/// A command failure: exit code plus a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Infer(args) => cmd_infer(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Check { file } => cmd_check(&file),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Diff(args) => cmd_diff(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dl: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_theory(path: &Path) -> Result<Theory, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    parse_theory(&text).map_err(|e| {
        let code = match e.kind {
            ParseErrorKind::Syntax => 2,
            _ => 3,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    })
}

fn write_output(target: Option<&Path>, content: &str) -> Result<(), Failure> {
    match target {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::new(1, format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Parses `--queries` entries (atom names, `~` prefixes tolerated) into
/// the atom set to restrict reports to.
fn query_atoms(queries: &[String]) -> Result<Option<BTreeSet<Atom>>, Failure> {
    if queries.is_empty() {
        return Ok(None);
    }
    let mut atoms = BTreeSet::new();
    for query in queries {
        let name = query.strip_prefix('~').unwrap_or(query);
        let atom = Atom::named(name)
            .map_err(|e| Failure::new(1, format!("bad query `{query}`: {e}")))?;
        atoms.insert(atom);
    }
    Ok(Some(atoms))
}

fn engine_form_or_failure(theory: &Theory) -> Result<Theory, Failure> {
    to_engine_form(theory).map_err(|e| Failure::new(3, e.to_string()))
}

fn cmd_infer(args: InferArgs) -> Result<(), Failure> {
    if args.engine != EngineChoice::Linear && (args.residue || args.stats) {
        return Err(Failure::new(
            1,
            "--residue and --stats only apply to the linear engine",
        ));
    }
    let theory = read_theory(&args.file)?;
    let atoms = theory.atoms();
    let started = Instant::now();

    let mut residue = None;
    let mut stats = None;
    let (set, order): (ConclusionSet, Vec<TaggedConclusion>) = match args.engine {
        EngineChoice::Oracle => {
            let (set, trace) = run_oracle(&theory, args.trace);
            (set, trace.map(|t| t.steps().to_vec()).unwrap_or_default())
        }
        EngineChoice::Transition => {
            let engine_form = engine_form_or_failure(&theory)?;
            let mut machine = dl_core::transitions::Interpreter::new(&engine_form)
                .expect("engine form has no superiority");
            machine.run_to_fixpoint();
            (machine.conclusions(), machine.order().to_vec())
        }
        EngineChoice::Linear => {
            let engine_form = engine_form_or_failure(&theory)?;
            let run = run_linear(&engine_form).expect("engine form has no superiority");
            residue = Some(run.residue);
            stats = Some(run.stats);
            (run.conclusions, run.order)
        }
    };
    let elapsed = started.elapsed();

    // Every engine reports over the source language; the engine form's
    // twins and marker atoms are plumbing, not answers.
    let mut set = set.restrict(&atoms);
    if !args.extended {
        set = set.external_only();
    }
    if let Some(queried) = query_atoms(&args.queries)? {
        set = set.restrict(&queried);
    }
    print!("{}", print_conclusions(&set, args.all, args.extended));

    if args.trace {
        println!("trace:");
        for (i, step) in order
            .iter()
            .filter(|c| atoms.contains(c.literal.atom()) && (args.extended || c.tag.is_external()))
            .enumerate()
        {
            println!("{:4}. {step}", i + 1);
        }
    }
    if args.residue {
        println!("residue:");
        for line in print_theory(&residue.expect("linear engine ran")).lines() {
            println!("  {line}");
        }
    }
    if args.stats {
        let stats = stats.expect("linear engine ran");
        println!("stats:");
        println!("  atoms: {}", atoms.len());
        println!("  universe: {}", stats.universe);
        println!("  rules: {}", stats.rules);
        println!("  initial occurrences: {}", stats.initial_occurrences);
        println!("  occurrence deletions: {}", stats.occurrence_deletions);
        println!("  rule deletions: {}", stats.rule_deletions);
        println!("  records enqueued: {}", stats.enqueued);
        println!("  records dequeued: {}", stats.dequeued);
        println!("  elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    }
    Ok(())
}

fn cmd_transform(args: TransformArgs) -> Result<(), Failure> {
    let theory = read_theory(&args.file)?;
    let rewritten = match args.stage {
        Stage::Prune => prune_superiority(&theory),
        Stage::Dup => duplicate_strict(&theory),
        Stage::Nosup => elim_sup(&theory).map_err(|e| Failure::new(3, e.to_string()))?,
        Stage::Engine => engine_form_or_failure(&theory)?,
    };
    write_output(args.output.as_deref(), &print_theory(&rewritten))
}

fn cmd_check(file: &Path) -> Result<(), Failure> {
    let theory = read_theory(file)?;
    println!(
        "ok: {} facts, {} rules, {} superiority pairs, {} atoms",
        theory.facts().len(),
        theory.rules().len(),
        theory.superiority().len(),
        theory.atoms().len()
    );
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    if args.size == 0 {
        return Err(Failure::new(1, "--size must be at least 1"));
    }
    let theory = generate::by_kind(&args.kind, args.size, args.branching, args.seed)
        .ok_or_else(|| {
            Failure::new(
                1,
                format!(
                    "unknown family `{}` (expected chain, circle, tree, teams, dag, or random)",
                    args.kind
                ),
            )
        })?;
    write_output(args.output.as_deref(), &print_theory(&theory))
}

fn cmd_diff(args: DiffArgs) -> Result<(), Failure> {
    match (args.file, args.seed_corpus) {
        (Some(file), None) => {
            let theory = read_theory(&file)?;
            let report = compare_engines(&theory).map_err(|e| Failure::new(3, e.to_string()))?;
            match report {
                DiffReport::Agree(set) => {
                    println!(
                        "3 engines agree (restricted to the source language): {} conclusions",
                        set.len()
                    );
                    Ok(())
                }
                DiffReport::Diverge(disagreements) => {
                    println!("{} disagreements:", disagreements.len());
                    for d in &disagreements {
                        println!("  {}", d.rendered());
                    }
                    Err(Failure::new(4, "the evaluators disagree"))
                }
            }
        }
        (None, Some(count)) => {
            let splits = corpus_disagreements(0..count);
            if splits.is_empty() {
                println!("{count} corpus theories, 0 disagreements");
                return Ok(());
            }
            for (seed, disagreements) in &splits {
                println!("seed {seed}: {} disagreements", disagreements.len());
                for d in disagreements {
                    println!("  {}", d.rendered());
                }
            }
            Err(Failure::new(
                4,
                format!("{} corpus theories split the evaluators", splits.len()),
            ))
        }
        _ => Err(Failure::new(
            1,
            "pass a theory file or --seed-corpus N (exactly one)",
        )),
    }
}
