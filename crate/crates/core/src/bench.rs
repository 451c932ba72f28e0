//! Harness around the checks: algorithm selection, instance suites,
//! percentage tables over summed costs, and the differential runner.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{ExplicitGba, StateDescriptor};
use crate::error::{Error, Result};
use crate::gen::{gen_nonacc_scc_chain, gen_trivial_accepting, random_gba, weak_random, GenConfig};
use crate::metrics::Metrics;
use crate::ndfs::bitstate::{bitstate_check, ApproxVerdict, BitstateAlgo};
use crate::ndfs::{and_check_traced, ndfs_baseline_traced, sd_check_traced};
use crate::oracle::{oracle_emptiness, validate_lasso};
use crate::product::{product_provider, KripkeStructure, LabeledGba};
use crate::provider::{explicit_provider, materialize, AutomatonProvider, ExplicitProvider};
use crate::scc::is_weak;
use crate::scc_algos::{ascc_check_traced, c99_check_traced, gv_check_traced};
use crate::search::{Caveat, SearchOutcome};
use crate::trace::{NoTrace, Tracer};
use crate::verdict::{Lasso, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Baseline,
    And,
    Sd,
    Gv,
    C99,
    Ascc,
    BitstateAnd,
    BitstateSd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Baseline,
        Algorithm::And,
        Algorithm::Sd,
        Algorithm::Gv,
        Algorithm::C99,
        Algorithm::Ascc,
        Algorithm::BitstateAnd,
        Algorithm::BitstateSd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::And => "and",
            Algorithm::Sd => "sd",
            Algorithm::Gv => "gv",
            Algorithm::C99 => "c99",
            Algorithm::Ascc => "ascc",
            Algorithm::BitstateAnd => "bitstate-and",
            Algorithm::BitstateSd => "bitstate-sd",
        }
    }

    /// Only ASCC and C99 accept generalized acceptance.
    pub fn single_condition_only(self) -> bool {
        !matches!(self, Algorithm::Ascc | Algorithm::C99)
    }

    pub fn needs_weak(self) -> bool {
        matches!(self, Algorithm::Sd | Algorithm::BitstateSd)
    }

    pub fn is_bitstate(self) -> bool {
        matches!(self, Algorithm::BitstateAnd | Algorithm::BitstateSd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::Config(format!("unknown algorithm `{s}` (expected one of {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub bitstate_bits: u32,
    pub runs: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            bitstate_bits: 20,
            runs: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Empty,
    ProbablyEmpty,
    Counterexample,
}

impl VerdictKind {
    pub fn exit_code(self) -> i32 {
        match self {
            VerdictKind::Empty | VerdictKind::ProbablyEmpty => 0,
            VerdictKind::Counterexample => 1,
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Empty => "empty",
            VerdictKind::ProbablyEmpty => "probably-empty",
            VerdictKind::Counterexample => "counterexample",
        })
    }
}

/// Result of [`run_check`], with lasso states rendered by the provider.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub algorithm: Algorithm,
    pub verdict: VerdictKind,
    pub lasso: Option<Lasso<String>>,
    pub metrics: Metrics,
    pub caveat: Option<Caveat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runs_performed: Option<usize>,
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "algorithm: {}", self.algorithm);
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if let Some(caveat) = self.caveat {
            let _ = writeln!(out, "caveat: {caveat:?}");
        }
        if let Some(lasso) = &self.lasso {
            let _ = writeln!(out, "prefix: {}", lasso.prefix.join(" "));
            let _ = writeln!(out, "cycle: {}", lasso.cycle.join(" "));
        }
        if let Some(runs) = self.runs_performed {
            let _ = writeln!(out, "runs: {runs}");
        }
        let m = &self.metrics;
        let _ = writeln!(out, "post_calls: {}", m.post_calls);
        let _ = writeln!(out, "successors_generated: {}", m.successors_generated);
        let _ = writeln!(out, "distinct_states: {}", m.distinct_states);
        let _ = writeln!(out, "transitions_explored: {}", m.transitions_explored);
        let _ = writeln!(out, "max_search_depth: {}", m.max_search_depth);
        let _ = writeln!(out, "aux_bits_per_state: {}", m.aux_bits_per_state);
        let _ = writeln!(out, "descriptor_bytes: {}", m.descriptor_bytes);
        let _ = writeln!(out, "wall_time_us: {}", m.wall_time.as_micros());
        out
    }
}

/// Runs one exact (non-bitstate) algorithm.
pub fn run_exact<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    algo: Algorithm,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    match algo {
        Algorithm::Baseline => ndfs_baseline_traced(p, tracer),
        Algorithm::And => and_check_traced(p, tracer),
        Algorithm::Sd => sd_check_traced(p, true, tracer),
        Algorithm::Gv => gv_check_traced(p, tracer),
        Algorithm::C99 => c99_check_traced(p, tracer),
        Algorithm::Ascc => ascc_check_traced(p, tracer),
        Algorithm::BitstateAnd | Algorithm::BitstateSd => Err(Error::Config(format!(
            "{algo} is approximate; use run_check"
        ))),
    }
}

/// Runs `algo` on the provider. The caller is responsible for the weakness
/// requirement of `sd` and `bitstate-sd`; see [`Instance::check_applicable`].
/// Bitstate searches ignore the tracer.
pub fn run_check<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    algo: Algorithm,
    opts: &CheckOptions,
    tracer: &mut dyn Tracer,
) -> Result<CheckReport> {
    let render = |p: &P, l: &Lasso<StateDescriptor>| Lasso {
        prefix: l.prefix.iter().map(|d| p.display(d)).collect(),
        cycle: l.cycle.iter().map(|d| p.display(d)).collect(),
    };
    if algo.is_bitstate() {
        let mode = if algo == Algorithm::BitstateAnd {
            BitstateAlgo::And
        } else {
            BitstateAlgo::Sd
        };
        let o = bitstate_check(p, mode, opts.bitstate_bits, opts.runs, opts.seed)?;
        let (verdict, lasso) = match &o.verdict {
            ApproxVerdict::ProbablyEmpty => (VerdictKind::ProbablyEmpty, None),
            ApproxVerdict::Counterexample(l) => (VerdictKind::Counterexample, Some(render(p, l))),
        };
        return Ok(CheckReport {
            schema: SCHEMA_VERSION,
            algorithm: algo,
            verdict,
            lasso,
            metrics: o.metrics,
            caveat: None,
            runs_performed: Some(o.runs_performed),
        });
    }
    let o = run_exact(p, algo, tracer)?;
    let (verdict, lasso) = match &o.verdict {
        Verdict::Empty => (VerdictKind::Empty, None),
        Verdict::Counterexample(l) => (VerdictKind::Counterexample, Some(render(p, l))),
    };
    Ok(CheckReport {
        schema: SCHEMA_VERSION,
        algorithm: algo,
        verdict,
        lasso,
        metrics: o.metrics,
        caveat: o.caveat,
        runs_performed: None,
    })
}

/// A loaded benchmark instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Explicit(ExplicitGba),
    Product(KripkeStructure, LabeledGba),
}

impl Instance {
    pub fn conditions(&self) -> usize {
        match self {
            Instance::Explicit(g) => g.k(),
            Instance::Product(_, a) => a.k(),
        }
    }

    /// Explicit automata are tested directly; a product is weak when its
    /// property automaton is.
    pub fn is_weak(&self) -> Result<bool> {
        match self {
            Instance::Explicit(g) => is_weak(g),
            Instance::Product(_, a) => is_weak(a.gba()),
        }
    }

    pub fn check_applicable(&self, algo: Algorithm) -> Result<()> {
        let k = self.conditions();
        if algo.single_condition_only() && k != 1 {
            return Err(Error::Contract(format!(
                "{algo} needs exactly one acceptance condition, got k = {k}"
            )));
        }
        if algo.needs_weak() && !self.is_weak()? {
            return Err(Error::Contract(format!("{algo} requires a weak automaton")));
        }
        Ok(())
    }

    pub fn with_provider<T>(&self, f: impl FnOnce(&mut dyn AutomatonProvider) -> T) -> T {
        match self {
            Instance::Explicit(g) => f(&mut explicit_provider(g)),
            Instance::Product(m, a) => f(&mut product_provider(m, a)),
        }
    }

    /// Reachable part as an explicit automaton, for the oracle.
    pub fn materialize(&self, limit: usize) -> Result<ExplicitGba> {
        match self {
            Instance::Explicit(g) => Ok(g.clone()),
            Instance::Product(m, a) => Ok(materialize(&mut product_provider(m, a), limit)?.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    Random(GenConfig),
    Weak(GenConfig),
    TrivialAccepting { n_sys: usize, seed: u64, nonempty: bool },
    NonaccChain { n_sccs: usize, scc_size: usize, seed: u64 },
}

impl GenSpec {
    pub fn generate(&self) -> Result<ExplicitGba> {
        match self {
            GenSpec::Random(c) => random_gba(c),
            GenSpec::Weak(c) => weak_random(c),
            GenSpec::TrivialAccepting { n_sys, seed, nonempty } => {
                gen_trivial_accepting(*n_sys, *seed, *nonempty)
            }
            GenSpec::NonaccChain { n_sccs, scc_size, seed } => {
                gen_nonacc_scc_chain(*n_sccs, *scc_size, *seed)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GenSpec::Random(_) => "random",
            GenSpec::Weak(_) => "weak",
            GenSpec::TrivialAccepting { .. } => "trivial-accepting",
            GenSpec::NonaccChain { .. } => "nonacc-chain",
        }
    }

    /// Parses `<generator> key=value...`, e.g.
    /// `random n=30 deg=2 k=2 density=0.2 seed=7`.
    pub fn parse(words: &[&str]) -> Result<Self> {
        let (kind, args) = words
            .split_first()
            .ok_or_else(|| Error::Config("missing generator name".into()))?;
        let mut n = None;
        let mut deg = 2.0;
        let mut k = 1;
        let mut density = 0.2;
        let mut seed = 0;
        let mut sccs = None;
        let mut size = None;
        let mut nonempty = false;
        for arg in args {
            if *arg == "nonempty" {
                nonempty = true;
                continue;
            }
            let (key, value) = arg
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, found `{arg}`")))?;
            let bad = || Error::Config(format!("bad value for `{key}`: `{value}`"));
            match key {
                "n" => n = Some(value.parse().map_err(|_| bad())?),
                "deg" => deg = value.parse().map_err(|_| bad())?,
                "k" => k = value.parse().map_err(|_| bad())?,
                "density" => density = value.parse().map_err(|_| bad())?,
                "seed" => seed = value.parse().map_err(|_| bad())?,
                "sccs" => sccs = Some(value.parse().map_err(|_| bad())?),
                "size" => size = Some(value.parse().map_err(|_| bad())?),
                "nonempty" => nonempty = value.parse().map_err(|_| bad())?,
                _ => return Err(Error::Config(format!("unknown generator option `{key}`"))),
            }
        }
        let need = |v: Option<usize>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("generator `{kind}` needs `{key}=`")))
        };
        let config = |n| GenConfig {
            n,
            avg_out_degree: deg,
            k,
            acc_density: density,
            seed,
        };
        let spec = match *kind {
            "random" => GenSpec::Random(config(need(n, "n")?)),
            "weak" => GenSpec::Weak(config(need(n, "n")?)),
            "trivial-accepting" => GenSpec::TrivialAccepting {
                n_sys: need(n, "n")?,
                seed,
                nonempty,
            },
            "nonacc-chain" => GenSpec::NonaccChain {
                n_sccs: need(sccs, "sccs")?,
                scc_size: need(size, "size")?,
                seed,
            },
            other => return Err(Error::Config(format!("unknown generator `{other}`"))),
        };
        Ok(spec)
    }
}

/// One line of a suite file.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    Gba(PathBuf),
    Product { kripke: PathBuf, prop: PathBuf },
    Gen(GenSpec),
}

impl InstanceSpec {
    pub fn load(&self) -> Result<Instance> {
        let read = |path: &Path| {
            std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read {}: {e}", path.display()))
            })
        };
        Ok(match self {
            InstanceSpec::Gba(path) => Instance::Explicit(ExplicitGba::parse(&read(path)?)?),
            InstanceSpec::Product { kripke, prop } => Instance::Product(
                KripkeStructure::parse(&read(kripke)?)?,
                LabeledGba::parse(&read(prop)?)?,
            ),
            InstanceSpec::Gen(spec) => Instance::Explicit(spec.generate()?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            InstanceSpec::Gba(path) => path.display().to_string(),
            InstanceSpec::Product { kripke, prop } => {
                format!("{} x {}", kripke.display(), prop.display())
            }
            InstanceSpec::Gen(spec) => match spec {
                GenSpec::Random(c) | GenSpec::Weak(c) => format!(
                    "{} n={} deg={} k={} density={} seed={}",
                    spec.name(),
                    c.n,
                    c.avg_out_degree,
                    c.k,
                    c.acc_density,
                    c.seed
                ),
                GenSpec::TrivialAccepting { n_sys, seed, nonempty } => format!(
                    "trivial-accepting n={n_sys} seed={seed}{}",
                    if *nonempty { " nonempty" } else { "" }
                ),
                GenSpec::NonaccChain { n_sccs, scc_size, seed } => {
                    format!("nonacc-chain sccs={n_sccs} size={scc_size} seed={seed}")
                }
            },
        }
    }
}

/// Reads a suite: one instance per line, `#` comments allowed.
///
/// ```text
/// gba models/a.gba
/// product models/m.k models/p.lba
/// gen random n=40 deg=2 k=1 density=0.1 seed=3
/// gen trivial-accepting n=50 seed=1
/// gen nonacc-chain sccs=4 size=6 seed=2
/// ```
///
/// Relative paths are resolved against `base`.
pub fn parse_suite(src: &str, base: &Path) -> Result<Vec<InstanceSpec>> {
    let mut out = Vec::new();
    for (line, content) in crate::text::lines(src) {
        let words: Vec<&str> = content.split_whitespace().collect();
        let at = |e: Error| Error::parse(line, e.to_string());
        let spec = match words.as_slice() {
            ["gba", path] => InstanceSpec::Gba(base.join(path)),
            ["product", kripke, prop] => InstanceSpec::Product {
                kripke: base.join(kripke),
                prop: base.join(prop),
            },
            ["gen", rest @ ..] => InstanceSpec::Gen(GenSpec::parse(rest).map_err(at)?),
            _ => {
                return Err(Error::parse(
                    line,
                    "expected `gba <file>`, `product <kripke> <prop>`, or `gen <generator> ...`",
                ))
            }
        };
        out.push(spec);
    }
    Ok(out)
}

/// Which summed quantity the percentage table compares.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    #[default]
    WallTime,
    PostCalls,
    SuccessorsGenerated,
}

impl Measure {
    pub fn of(self, m: &Metrics) -> f64 {
        match self {
            Measure::WallTime => m.wall_time.as_secs_f64(),
            Measure::PostCalls => m.post_calls as f64,
            Measure::SuccessorsGenerated => m.successors_generated as f64,
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wall-time" => Ok(Measure::WallTime),
            "post-calls" => Ok(Measure::PostCalls),
            "successors" | "successors-generated" => Ok(Measure::SuccessorsGenerated),
            other => Err(Error::Config(format!("unknown measure `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub algorithm: String,
    /// Relative to the baseline, rounded to one decimal.
    pub percent: f64,
}

/// Sums expressed as percentages of `baseline`'s sum, sorted ascending.
pub fn percentage_table(totals: &[(String, f64)], baseline: &str) -> Result<Vec<TableRow>> {
    let base = totals
        .iter()
        .find(|(name, _)| name == baseline)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Config(format!("baseline `{baseline}` has no total")))?;
    let mut rows: Vec<TableRow> = totals
        .iter()
        .map(|(name, v)| TableRow {
            algorithm: name.clone(),
            percent: if name == baseline {
                100.0
            } else if base > 0.0 {
                (v / base * 1000.0).round() / 10.0
            } else {
                0.0
            },
        })
        .collect();
    rows.sort_by(|a, b| a.percent.total_cmp(&b.percent).then_with(|| a.algorithm.cmp(&b.algorithm)));
    Ok(rows)
}

pub fn format_table(rows: &[TableRow]) -> String {
    let width = rows.iter().map(|r| r.algorithm.len()).max().unwrap_or(0);
    rows.iter()
        .map(|r| format!("{:<width$}  {:>6.1} %\n", r.algorithm, r.percent))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchCell {
    pub instance: String,
    pub algorithm: Algorithm,
    pub verdict: VerdictKind,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: u32,
    pub baseline: Algorithm,
    pub measure: Measure,
    pub cells: Vec<BenchCell>,
    pub totals: Vec<(Algorithm, Metrics)>,
    pub table: Vec<TableRow>,
}

impl BenchReport {
    pub fn cell(&self, instance: &str, algo: Algorithm) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.instance == instance && c.algorithm == algo)
    }
}

/// Runs every algorithm on every instance (cells in parallel) and sums
/// the chosen measure per algorithm.
pub fn run_bench(
    instances: &[(String, Instance)],
    algos: &[Algorithm],
    baseline: Algorithm,
    measure: Measure,
    opts: &CheckOptions,
) -> Result<BenchReport> {
    if !algos.contains(&baseline) {
        return Err(Error::Config(format!("baseline {baseline} is not among the algorithms")));
    }
    for (label, inst) in instances {
        for &algo in algos {
            inst.check_applicable(algo)
                .map_err(|e| Error::Config(format!("{label}: {e}")))?;
        }
    }
    let jobs: Vec<(usize, Algorithm)> = (0..instances.len())
        .flat_map(|i| algos.iter().map(move |&a| (i, a)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(i, algo)| {
            let (label, inst) = &instances[i];
            let report = inst.with_provider(|p| run_check(p, algo, opts, &mut NoTrace))?;
            Ok(BenchCell {
                instance: label.clone(),
                algorithm: algo,
                verdict: report.verdict,
                metrics: report.metrics,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let totals: Vec<(Algorithm, Metrics)> = algos
        .iter()
        .map(|&a| {
            let mut sum = Metrics::default();
            for c in cells.iter().filter(|c| c.algorithm == a) {
                sum += c.metrics;
            }
            (a, sum)
        })
        .collect();
    let named: Vec<(String, f64)> = totals
        .iter()
        .map(|(a, m)| (a.name().to_string(), measure.of(m)))
        .collect();
    let table = percentage_table(&named, baseline.name())?;
    Ok(BenchReport {
        schema: SCHEMA_VERSION,
        baseline,
        measure,
        cells,
        totals,
        table,
    })
}

/// An exact check under differential test.
#[derive(Clone, Copy)]
pub struct DiffChecker {
    pub name: &'static str,
    pub single_condition_only: bool,
    pub run: for<'g> fn(&mut ExplicitProvider<'g>) -> Result<SearchOutcome>,
}

impl DiffChecker {
    fn applies(&self, g: &ExplicitGba) -> bool {
        !self.single_condition_only || g.k() == 1
    }
}

/// Baseline, AND, GV, C99, and ASCC.
pub fn standard_checkers() -> Vec<DiffChecker> {
    vec![
        DiffChecker {
            name: "baseline",
            single_condition_only: true,
            run: |p| run_exact(p, Algorithm::Baseline, &mut NoTrace),
        },
        DiffChecker {
            name: "and",
            single_condition_only: true,
            run: |p| run_exact(p, Algorithm::And, &mut NoTrace),
        },
        DiffChecker {
            name: "gv",
            single_condition_only: true,
            run: |p| run_exact(p, Algorithm::Gv, &mut NoTrace),
        },
        DiffChecker {
            name: "c99",
            single_condition_only: false,
            run: |p| run_exact(p, Algorithm::C99, &mut NoTrace),
        },
        DiffChecker {
            name: "ascc",
            single_condition_only: false,
            run: |p| run_exact(p, Algorithm::Ascc, &mut NoTrace),
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffRanges {
    pub n: RangeInclusive<usize>,
    pub k: RangeInclusive<usize>,
    pub avg_out_degree: RangeInclusive<f64>,
    pub acc_density: RangeInclusive<f64>,
}

impl Default for DiffRanges {
    fn default() -> Self {
        DiffRanges {
            n: 1..=50,
            k: 0..=3,
            avg_out_degree: 0.5..=3.0,
            acc_density: 0.05..=0.5,
        }
    }
}

impl DiffRanges {
    /// Configuration of the `index`-th instance of a run seeded with `seed`.
    pub fn sample(&self, seed: u64, index: u64) -> GenConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let pick = |rng: &mut ChaCha8Rng, r: &RangeInclusive<f64>| {
            if r.start() >= r.end() {
                *r.start()
            } else {
                rng.random_range(r.clone())
            }
        };
        let n = rng.random_range(self.n.clone());
        let k = rng.random_range(self.k.clone());
        let avg_out_degree = pick(&mut rng, &self.avg_out_degree);
        let acc_density = pick(&mut rng, &self.acc_density);
        GenConfig {
            n,
            avg_out_degree,
            k,
            acc_density,
            seed: rng.random(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Disagreement {
    pub config: GenConfig,
    pub algorithm: String,
    pub oracle_empty: bool,
    /// `None` when the check failed with an error.
    pub reported_empty: Option<bool>,
    pub lasso_valid: bool,
    /// Smallest automaton found that still shows the failure.
    pub minimized: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DiffSummary {
    pub instances: usize,
    pub nonempty: usize,
    pub checks: usize,
    pub disagreements: Vec<Disagreement>,
}

impl DiffSummary {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Whether `checker` fails on `g`: wrong verdict, invalid lasso, or error.
fn failure(checker: &DiffChecker, g: &ExplicitGba) -> Option<(bool, Option<bool>, bool)> {
    let oracle_empty = oracle_emptiness(g).is_empty();
    let outcome = (checker.run)(&mut explicit_provider(g));
    let Ok(outcome) = outcome else {
        return Some((oracle_empty, None, false));
    };
    let empty = outcome.verdict.is_empty();
    let valid = empty || validate_lasso(&mut explicit_provider(g), &outcome.verdict);
    (empty != oracle_empty || !valid).then_some((oracle_empty, Some(empty), valid))
}

fn without_edge(g: &ExplicitGba, s: usize, i: usize) -> ExplicitGba {
    let mut succ = g.successors().to_vec();
    succ[s].remove(i);
    ExplicitGba::from_parts(g.init(), succ, g.acceptance().to_vec(), g.k())
        .expect("removing an edge keeps the automaton well formed")
}

fn without_state(g: &ExplicitGba, x: usize) -> Option<ExplicitGba> {
    if x == g.init() || g.n() == 1 {
        return None;
    }
    let shift = |s: usize| if s > x { s - 1 } else { s };
    let succ = (0..g.n())
        .filter(|&s| s != x)
        .map(|s| g.succ(s).iter().filter(|&&t| t != x).map(|&t| shift(t)).collect())
        .collect();
    let acc = (0..g.n()).filter(|&s| s != x).map(|s| g.acc(s)).collect();
    ExplicitGba::from_parts(shift(g.init()), succ, acc, g.k()).ok()
}

fn without_acceptance(g: &ExplicitGba, s: usize) -> ExplicitGba {
    let mut h = g.clone();
    h.set_acceptance(s, Default::default());
    h
}

/// Greedily deletes states, edges, and acceptance marks while `checker`
/// keeps failing.
pub fn minimize(checker: &DiffChecker, g: &ExplicitGba) -> ExplicitGba {
    let mut cur = g.clone();
    let fails = |h: &ExplicitGba| failure(checker, h).is_some();
    loop {
        let mut changed = false;
        let mut x = 0;
        while x < cur.n() {
            match without_state(&cur, x) {
                Some(h) if fails(&h) => {
                    cur = h;
                    changed = true;
                }
                _ => x += 1,
            }
        }
        for s in 0..cur.n() {
            let mut i = 0;
            while i < cur.succ(s).len() {
                let h = without_edge(&cur, s, i);
                if fails(&h) {
                    cur = h;
                    changed = true;
                } else {
                    i += 1;
                }
            }
        }
        for s in 0..cur.n() {
            if !cur.acc(s).is_empty() {
                let h = without_acceptance(&cur, s);
                if fails(&h) {
                    cur = h;
                    changed = true;
                }
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Generates `count` random instances and compares every applicable
/// checker against the oracle.
pub fn run_differential(count: usize, ranges: &DiffRanges, seed: u64) -> DiffSummary {
    run_differential_with(count, ranges, seed, &standard_checkers())
}

pub fn run_differential_with(
    count: usize,
    ranges: &DiffRanges,
    seed: u64,
    checkers: &[DiffChecker],
) -> DiffSummary {
    let per_instance: Vec<(bool, usize, Vec<Disagreement>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let config = ranges.sample(seed, i);
            let g = random_gba(&config).expect("sampled configuration is valid");
            let nonempty = !oracle_emptiness(&g).is_empty();
            let mut checks = 0;
            let mut bad = Vec::new();
            for checker in checkers.iter().filter(|c| c.applies(&g)) {
                checks += 1;
                if let Some((oracle_empty, reported_empty, lasso_valid)) = failure(checker, &g) {
                    bad.push(Disagreement {
                        config: config.clone(),
                        algorithm: checker.name.to_string(),
                        oracle_empty,
                        reported_empty,
                        lasso_valid,
                        minimized: minimize(checker, &g).to_text(),
                    });
                }
            }
            (nonempty, checks, bad)
        })
        .collect();
    let mut summary = DiffSummary {
        instances: count,
        ..DiffSummary::default()
    };
    for (nonempty, checks, bad) in per_instance {
        summary.nonempty += usize::from(nonempty);
        summary.checks += checks;
        summary.disagreements.extend(bad);
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("hpy".parse::<Algorithm>().is_err());
    }

    #[test]
    fn single_algorithm_is_hundred_percent() {
        let rows = percentage_table(&[("ascc".into(), 3.7)], "ascc").unwrap();
        assert_eq!(rows, vec![TableRow { algorithm: "ascc".into(), percent: 100.0 }]);
    }

    #[test]
    fn table_sorted_ascending() {
        let totals: Vec<(String, f64)> = [("baseline", 10.0), ("c99", 12.5), ("ascc", 6.04)]
            .iter()
            .map(|(a, v)| (a.to_string(), *v))
            .collect();
        let rows = percentage_table(&totals, "baseline").unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
        assert_eq!(names, ["ascc", "baseline", "c99"]);
        assert_eq!(rows[0].percent, 60.4);
        assert_eq!(rows[2].percent, 125.0);
        assert!(percentage_table(&totals, "gv").is_err());
    }

    #[test]
    fn suite_lines() {
        let src = "# demo\ngba a.gba\nproduct m.k p.lba\ngen random n=5 seed=2 k=2\ngen nonacc-chain sccs=2 size=3\n";
        let specs = parse_suite(src, Path::new("/x")).unwrap();
        assert_eq!(specs[0], InstanceSpec::Gba(PathBuf::from("/x/a.gba")));
        assert!(matches!(&specs[2], InstanceSpec::Gen(GenSpec::Random(c)) if c.n == 5 && c.k == 2 && c.seed == 2));
        assert!(matches!(specs[3], InstanceSpec::Gen(GenSpec::NonaccChain { n_sccs: 2, scc_size: 3, .. })));
        let err = parse_suite("gba\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_suite("gen random seed=1", Path::new(".")).is_err());
    }

    #[test]
    fn zero_instances_pass() {
        let s = run_differential(0, &DiffRanges::default(), 1);
        assert!(s.passed());
        assert_eq!(s.instances, 0);
        assert_eq!(s.checks, 0);
    }

    #[test]
    fn small_differential_run() {
        let s = run_differential(200, &DiffRanges::default(), 11);
        assert!(s.passed(), "{:?}", s.disagreements);
        assert!(s.nonempty > 0);
    }
}
