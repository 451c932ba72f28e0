use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use buchi_core::bench::{
    format_table, parse_suite, DiffRanges, GenSpec, Instance, Measure, VerdictKind, SCHEMA_VERSION,
};
use buchi_core::trace::{NoTrace, Tracer, WriteTracer};
use buchi_core::{
    materialize, oracle_emptiness, product_provider, run_bench, run_check, run_differential, Algorithm,
    AutomatonProvider, CheckOptions, Error, ExplicitGba, KripkeStructure, LabeledGba, Lasso, Verdict,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

const MATERIALIZE_LIMIT: usize = 10_000_000;

#[derive(Parser)]
#[command(name = "buchi", version, about = "Emptiness checks for Büchi and generalized Büchi automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one emptiness check.
    Check(CheckArgs),
    /// Run several algorithms over a suite and print a percentage table.
    Bench(BenchArgs),
    /// Generate a random automaton in the text format.
    Gen(GenArgs),
    /// Decide emptiness with the reference SCC oracle.
    Oracle(OracleArgs),
    /// Compare every exact algorithm against the oracle on random instances.
    Diff(DiffArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Explicit (generalized) Büchi automaton.
    #[arg(long, alias = "ba", value_name = "FILE", conflicts_with_all = ["kripke", "prop"])]
    gba: Option<PathBuf>,
    /// Kripke structure; needs --prop.
    #[arg(long, value_name = "FILE", requires = "prop")]
    kripke: Option<PathBuf>,
    /// Guarded property automaton; needs --kripke.
    #[arg(long, value_name = "FILE", requires = "kripke")]
    prop: Option<PathBuf>,
}

#[derive(Args)]
struct BitstateArgs {
    /// Bitstate table exponent (2^B two-bit slots).
    #[arg(long, value_name = "B", default_value_t = 20)]
    bitstate_bits: u32,
    /// Bitstate runs with independent hash seeds.
    #[arg(long, value_name = "R", default_value_t = 1)]
    runs: usize,
    /// Hash seed of the first bitstate run.
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
}

impl BitstateArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            bitstate_bits: self.bitstate_bits,
            runs: self.runs,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    algo: Algorithm,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    bitstate: BitstateArgs,
    #[arg(long)]
    json: bool,
    /// Write search events, one per line.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_name = "FILE")]
    suite: PathBuf,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "baseline,and,gv,c99,ascc")]
    algo: Vec<Algorithm>,
    #[arg(long, default_value = "baseline")]
    baseline: Algorithm,
    /// wall-time, post-calls, or successors.
    #[arg(long, default_value = "wall-time")]
    measure: Measure,
    #[command(flatten)]
    bitstate: BitstateArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Generator and options, e.g. `random n=30 deg=2 k=2 density=0.2 seed=7`.
    #[arg(required = true, num_args = 1..)]
    spec: Vec<String>,
    /// Output file; standard output if absent.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// JSON sidecar with the generator configuration and oracle verdict.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    #[arg(long)]
    json: bool,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn load(input: &InputArgs) -> Result<Instance, Error> {
    match (&input.gba, &input.kripke, &input.prop) {
        (Some(g), None, None) => Ok(Instance::Explicit(ExplicitGba::parse(&read(g)?)?)),
        (None, Some(m), Some(a)) => Ok(Instance::Product(
            KripkeStructure::parse(&read(m)?)?,
            LabeledGba::parse(&read(a)?)?,
        )),
        _ => Err(Error::Config("give either --gba FILE or --kripke FILE --prop FILE".into())),
    }
}

fn print_json(text: serde_json::Result<String>) {
    println!("{}", text.expect("reports serialize"));
}

fn check(args: CheckArgs) -> Result<ExitCode, Error> {
    let inst = load(&args.input)?;
    inst.check_applicable(args.algo)?;
    let opts = args.bitstate.options();
    let report = match &args.trace {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))?;
            let mut tracer = WriteTracer::new(BufWriter::new(file));
            let report = inst.with_provider(|p| run_check(p, args.algo, &opts, &mut tracer))?;
            tracer
                .finish()
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            report
        }
        None => inst.with_provider(|p| run_check(p, args.algo, &opts, &mut NoTrace as &mut dyn Tracer))?,
    };
    if args.json {
        print_json(serde_json::to_string_pretty(&report));
    } else {
        print!("{}", report.to_text());
    }
    Ok(ExitCode::from(report.verdict.exit_code() as u8))
}

fn bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let base = args.suite.parent().unwrap_or(Path::new("."));
    let specs = parse_suite(&read(&args.suite)?, base)?;
    let instances = specs
        .iter()
        .map(|s| Ok((s.label(), s.load()?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let report = run_bench(&instances, &args.algo, args.baseline, args.measure, &args.bitstate.options())?;
    if args.json {
        print_json(serde_json::to_string_pretty(&report));
    } else {
        for cell in &report.cells {
            println!(
                "{}  {}  {}  post={} succ={} states={} us={}",
                cell.instance,
                cell.algorithm,
                cell.verdict,
                cell.metrics.post_calls,
                cell.metrics.successors_generated,
                cell.metrics.distinct_states,
                cell.metrics.wall_time.as_micros()
            );
        }
        println!();
        print!("{}", format_table(&report.table));
    }
    Ok(ExitCode::SUCCESS)
}

fn verdict_kind<S>(v: &Verdict<S>) -> VerdictKind {
    if v.is_empty() {
        VerdictKind::Empty
    } else {
        VerdictKind::Counterexample
    }
}

fn gen(args: GenArgs) -> Result<ExitCode, Error> {
    let words: Vec<&str> = args.spec.iter().map(String::as_str).collect();
    let spec = GenSpec::parse(&words)?;
    let g = spec.generate()?;
    let text = g.to_text();
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.manifest {
        let manifest = json!({
            "schema": SCHEMA_VERSION,
            "generator": spec,
            "states": g.n(),
            "conditions": g.k(),
            "oracle": verdict_kind(&oracle_emptiness(&g)),
        });
        write_file(path, &format!("{}\n", serde_json::to_string_pretty(&manifest).expect("manifest serializes")))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> Result<ExitCode, Error> {
    let inst = load(&args.input)?;
    let (verdict, lasso): (VerdictKind, Option<Lasso<String>>) = match &inst {
        Instance::Explicit(g) => {
            let v = oracle_emptiness(g);
            (verdict_kind(&v), v.lasso().cloned().map(|l| l.map(|s| s.to_string())))
        }
        Instance::Product(m, a) => {
            let mut p = product_provider(m, a);
            let (g, descriptors) = materialize(&mut p, MATERIALIZE_LIMIT)?;
            let v = oracle_emptiness(&g);
            let lasso = v.lasso().cloned().map(|l| l.map(|s| p.display(&descriptors[s])));
            (verdict_kind(&v), lasso)
        }
    };
    if args.json {
        print_json(serde_json::to_string_pretty(&json!({ "schema": SCHEMA_VERSION, "verdict": verdict, "lasso": lasso })));
    } else {
        println!("verdict: {verdict}");
        if let Some(l) = &lasso {
            println!("prefix: {}", l.prefix.join(" "));
            println!("cycle: {}", l.cycle.join(" "));
        }
    }
    Ok(ExitCode::from(verdict.exit_code() as u8))
}

fn diff(args: DiffArgs) -> Result<ExitCode, Error> {
    if args.max_n == 0 {
        return Err(Error::Config("--max-n must be at least 1".into()));
    }
    let ranges = DiffRanges {
        n: 1..=args.max_n,
        k: 0..=args.max_k,
        ..DiffRanges::default()
    };
    let summary = run_differential(args.count, &ranges, args.seed);
    if args.json {
        print_json(serde_json::to_string_pretty(&summary));
    } else {
        println!(
            "instances: {}  non-empty: {}  checks: {}  disagreements: {}",
            summary.instances,
            summary.nonempty,
            summary.checks,
            summary.disagreements.len()
        );
        for d in &summary.disagreements {
            println!(
                "\n{} on seed {}: oracle empty = {}, reported empty = {:?}, lasso valid = {}",
                d.algorithm, d.config.seed, d.oracle_empty, d.reported_empty, d.lasso_valid
            );
            print!("{}", d.minimized);
        }
    }
    Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Oracle(a) => oracle(a),
        Command::Diff(a) => diff(a),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
