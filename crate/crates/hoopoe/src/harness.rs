//! Experiment runner and CLI: repeated seeded runs per function and
//! algorithm, success rates and evaluation statistics, paired early-stopping
//! comparison, and CSV emission.
//!
//! Runs are paired across algorithms by the seed schedule `base_seed + i`,
//! so a comparison on the same spec is a per-seed paired contest. All
//! outputs are deterministic byte-for-byte given the flags.

use std::cmp::Ordering;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::benchfns::{self, BenchmarkSpec};
use crate::core::{ConfigError, RunResult};
use crate::cuckoo::{self, CuckooConfig};
use crate::hoopoe::{self, HoopoeConfig};
use crate::levy::{LevyError, LevyParams, DEFAULT_SCALE_FRACTION, DEFAULT_TAIL_EXPONENT};
use crate::probing::{
    ProbeError, ProbeParams, DEFAULT_DIG_EVALS_PER_DIM, DEFAULT_DIG_THRESHOLD,
    DEFAULT_PROBES_PER_REGION, DEFAULT_RADIUS_FRACTION, DEFAULT_SHRINK_FACTOR,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Bench(#[from] benchfns::BenchError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Levy(#[from] LevyError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error("experiments are not comparable: {0}")]
    Mismatched(String),
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed summary csv at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Hoopoe,
    Cuckoo,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Hoopoe => "hoopoe",
            Algorithm::Cuckoo => "cuckoo",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-algorithm configuration template; the harness overwrites the seed and
/// target fields for each run.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmConfig {
    Hoopoe(HoopoeConfig),
    Cuckoo(CuckooConfig),
}

impl AlgorithmConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgorithmConfig::Hoopoe(_) => Algorithm::Hoopoe,
            AlgorithmConfig::Cuckoo(_) => Algorithm::Cuckoo,
        }
    }

    pub fn max_evaluations(&self) -> u64 {
        match self {
            AlgorithmConfig::Hoopoe(c) => c.max_evaluations,
            AlgorithmConfig::Cuckoo(c) => c.max_evaluations,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            AlgorithmConfig::Hoopoe(c) => c.validate(),
            AlgorithmConfig::Cuckoo(c) => c.validate(),
        }
    }

    fn for_run(&self, seed: u64, target_value: f64, target_tolerance: f64) -> Self {
        let mut config = self.clone();
        match &mut config {
            AlgorithmConfig::Hoopoe(c) => {
                c.seed = seed;
                c.target_value = target_value;
                c.target_tolerance = target_tolerance;
            }
            AlgorithmConfig::Cuckoo(c) => {
                c.seed = seed;
                c.target_value = target_value;
                c.target_tolerance = target_tolerance;
            }
        }
        config
    }
}

/// One experiment: `runs` independent seeded runs of one algorithm on one
/// registered function.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub function: String,
    pub dim: usize,
    pub runs: usize,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    pub config: AlgorithmConfig,
    /// A run succeeds when its best value is within this absolute tolerance
    /// of the registered optimum.
    pub success_tolerance: f64,
}

/// Scalar outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub success: bool,
    pub best_value: f64,
    pub evaluations: u64,
    pub mode_switch_iteration: Option<u64>,
}

/// Evaluation statistics over the successful runs of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalStats {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
    pub min: u64,
    pub median: f64,
    pub max: u64,
}

/// Aggregate outcome of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub function: String,
    pub dim: usize,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub base_seed: u64,
    pub max_evaluations: u64,
    pub success_tolerance: f64,
    pub records: Vec<RunRecord>,
    pub successes: usize,
    /// Exactly `successes / runs`.
    pub success_rate: f64,
    /// Over successful runs only (failures are budget-censored); `None` when
    /// nothing succeeded.
    pub evals: Option<EvalStats>,
}

/// Executes the experiment: `runs` independent seeded runs, aggregated
/// deterministically. Runs execute in parallel; records are ordered by seed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentSummary, HarnessError> {
    let bench = benchfns::registry(&spec.function, Some(spec.dim))?;
    spec.config.validate()?;

    let target_value = bench.optimum_value;
    let objective = &bench.objective;
    let records: Vec<RunRecord> = (0..spec.runs)
        .into_par_iter()
        .map(|i| {
            let seed = spec.base_seed.wrapping_add(i as u64);
            let config = spec
                .config
                .for_run(seed, target_value, spec.success_tolerance);
            let result = match &config {
                AlgorithmConfig::Hoopoe(c) => hoopoe::run(c, objective),
                AlgorithmConfig::Cuckoo(c) => cuckoo::run(c, objective),
            }
            .expect("config validated before the runs started");
            RunRecord {
                seed,
                success: result.success,
                best_value: result.best.value,
                evaluations: result.evaluations_used,
                mode_switch_iteration: result.mode_switch_iteration,
            }
        })
        .collect();

    Ok(summarize(spec, records))
}

fn summarize(spec: &ExperimentSpec, records: Vec<RunRecord>) -> ExperimentSummary {
    let successes = records.iter().filter(|r| r.success).count();
    let mut successful_evals: Vec<u64> = records
        .iter()
        .filter(|r| r.success)
        .map(|r| r.evaluations)
        .collect();
    successful_evals.sort_unstable();
    let evals = if successful_evals.is_empty() {
        None
    } else {
        let n = successful_evals.len();
        let mean = successful_evals.iter().sum::<u64>() as f64 / n as f64;
        let std = if n > 1 {
            let ss: f64 = successful_evals
                .iter()
                .map(|&e| (e as f64 - mean).powi(2))
                .sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let median = if n % 2 == 1 {
            successful_evals[n / 2] as f64
        } else {
            (successful_evals[n / 2 - 1] + successful_evals[n / 2]) as f64 / 2.0
        };
        Some(EvalStats {
            mean,
            std,
            min: successful_evals[0],
            median,
            max: successful_evals[n - 1],
        })
    };
    ExperimentSummary {
        function: spec.function.clone(),
        dim: spec.dim,
        algorithm: spec.config.algorithm(),
        runs: spec.runs,
        base_seed: spec.base_seed,
        max_evaluations: spec.config.max_evaluations(),
        success_tolerance: spec.success_tolerance,
        records,
        successes,
        success_rate: successes as f64 / spec.runs as f64,
        evals,
    }
}

/// Paired comparison of two experiments run under identical conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub function: String,
    pub dim: usize,
    pub runs: usize,
    pub left_algorithm: Algorithm,
    pub right_algorithm: Algorithm,
    pub left_mean_evaluations: f64,
    pub right_mean_evaluations: f64,
    /// left mean - right mean; negative means the left algorithm stops
    /// earlier on average.
    pub mean_delta: f64,
    pub left_wins: usize,
    pub right_wins: usize,
    pub ties: usize,
}

impl ComparisonReport {
    pub fn left_earlier(&self) -> bool {
        self.mean_delta < 0.0
    }
}

/// Compares two summaries produced on the same function, dimension, budget,
/// tolerance and seed schedule.
///
/// A paired win is decided per seed: a successful run beats a failed one;
/// two successes are ranked by evaluations used; two failures by best value;
/// exact equality is a tie.
pub fn compare(
    left: &ExperimentSummary,
    right: &ExperimentSummary,
) -> Result<ComparisonReport, HarnessError> {
    let mut mismatches = Vec::new();
    if left.function != right.function {
        mismatches.push(format!("function {} vs {}", left.function, right.function));
    }
    if left.dim != right.dim {
        mismatches.push(format!("dim {} vs {}", left.dim, right.dim));
    }
    if left.runs != right.runs {
        mismatches.push(format!("runs {} vs {}", left.runs, right.runs));
    }
    if left.base_seed != right.base_seed {
        mismatches.push(format!(
            "base_seed {} vs {}",
            left.base_seed, right.base_seed
        ));
    }
    if left.max_evaluations != right.max_evaluations {
        mismatches.push(format!(
            "budget {} vs {}",
            left.max_evaluations, right.max_evaluations
        ));
    }
    if left.success_tolerance != right.success_tolerance {
        mismatches.push(format!(
            "tolerance {} vs {}",
            left.success_tolerance, right.success_tolerance
        ));
    }
    if !mismatches.is_empty() {
        return Err(HarnessError::Mismatched(mismatches.join(", ")));
    }

    let mut left_wins = 0;
    let mut right_wins = 0;
    let mut ties = 0;
    for (l, r) in left.records.iter().zip(&right.records) {
        match rank_pair(l, r) {
            Ordering::Less => left_wins += 1,
            Ordering::Greater => right_wins += 1,
            Ordering::Equal => ties += 1,
        }
    }

    let mean = |s: &ExperimentSummary| s.evals.map_or(f64::NAN, |e| e.mean);
    let left_mean_evaluations = mean(left);
    let right_mean_evaluations = mean(right);
    Ok(ComparisonReport {
        function: left.function.clone(),
        dim: left.dim,
        runs: left.runs,
        left_algorithm: left.algorithm,
        right_algorithm: right.algorithm,
        left_mean_evaluations,
        right_mean_evaluations,
        mean_delta: left_mean_evaluations - right_mean_evaluations,
        left_wins,
        right_wins,
        ties,
    })
}

/// `Less` means the left record is the better outcome.
fn rank_pair(left: &RunRecord, right: &RunRecord) -> Ordering {
    right
        .success
        .cmp(&left.success)
        .then_with(|| {
            if left.success && right.success {
                left.evaluations.cmp(&right.evaluations)
            } else if !left.success && !right.success {
                left.best_value.total_cmp(&right.best_value)
            } else {
                Ordering::Equal
            }
        })
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes one experiment as CSV: a header row, one row per run, and a
/// summary footer row. Re-running with the same spec produces identical
/// bytes.
pub fn emit_csv(summary: &ExperimentSummary, path: &Path) -> Result<(), HarnessError> {
    let mut out = String::new();
    out.push_str("seed,success,best_value,evaluations,mode_switch_iteration\n");
    for r in &summary.records {
        let mode_switch = r
            .mode_switch_iteration
            .map_or_else(String::new, |i| i.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.seed,
            u8::from(r.success),
            fmt_real(r.best_value),
            r.evaluations,
            mode_switch
        );
    }
    out.push_str(&summary_footer(summary));
    write_file(path, &out)
}

fn summary_footer(summary: &ExperimentSummary) -> String {
    let stats = summary.evals.map_or_else(
        || ",,,,".to_string(),
        |e| {
            format!(
                "{},{},{},{},{}",
                fmt_real(e.mean),
                fmt_real(e.std),
                e.min,
                fmt_real(e.median),
                e.max
            )
        },
    );
    format!(
        "summary,{},{},{}\n",
        summary.runs,
        fmt_real(summary.success_rate),
        stats
    )
}

/// The footer fields parsed back from an emitted CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSummary {
    pub runs: usize,
    pub success_rate: f64,
    pub evals: Option<EvalStats>,
}

/// Parses a file produced by [`emit_csv`] back into its run records and
/// summary fields.
pub fn parse_summary_csv(contents: &str) -> Result<(Vec<RunRecord>, ParsedSummary), HarnessError> {
    let malformed = |line: usize, message: &str| HarnessError::MalformedCsv {
        line,
        message: message.to_string(),
    };
    let mut lines = contents.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty file"))?;
    if header != "seed,success,best_value,evaluations,mode_switch_iteration" {
        return Err(malformed(1, "unexpected header"));
    }
    let mut records = Vec::new();
    let mut footer = None;
    for (index, line) in lines {
        let line_no = index + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.first() == Some(&"summary") {
            if fields.len() != 8 {
                return Err(malformed(line_no, "summary row needs 8 fields"));
            }
            let runs = fields[1]
                .parse()
                .map_err(|_| malformed(line_no, "bad runs"))?;
            let success_rate = fields[2]
                .parse()
                .map_err(|_| malformed(line_no, "bad success_rate"))?;
            let evals = if fields[3].is_empty() {
                None
            } else {
                Some(EvalStats {
                    mean: fields[3]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad mean"))?,
                    std: fields[4]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad std"))?,
                    min: fields[5]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad min"))?,
                    median: fields[6]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad median"))?,
                    max: fields[7]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad max"))?,
                })
            };
            footer = Some(ParsedSummary {
                runs,
                success_rate,
                evals,
            });
            continue;
        }
        if fields.len() != 5 {
            return Err(malformed(line_no, "run row needs 5 fields"));
        }
        records.push(RunRecord {
            seed: fields[0]
                .parse()
                .map_err(|_| malformed(line_no, "bad seed"))?,
            success: match fields[1] {
                "1" => true,
                "0" => false,
                _ => return Err(malformed(line_no, "success must be 0 or 1")),
            },
            best_value: fields[2]
                .parse()
                .map_err(|_| malformed(line_no, "bad best_value"))?,
            evaluations: fields[3]
                .parse()
                .map_err(|_| malformed(line_no, "bad evaluations"))?,
            mode_switch_iteration: if fields[4].is_empty() {
                None
            } else {
                Some(
                    fields[4]
                        .parse()
                        .map_err(|_| malformed(line_no, "bad mode_switch_iteration"))?,
                )
            },
        });
    }
    let footer = footer.ok_or_else(|| malformed(contents.lines().count(), "missing footer"))?;
    Ok((records, footer))
}

/// Writes a run trace as CSV with the fixed column order
/// `iteration,evaluations,best_value,mode`.
pub fn emit_trace(result: &RunResult, path: &Path) -> Result<(), HarnessError> {
    let mut out = String::new();
    out.push_str("iteration,evaluations,best_value,mode\n");
    for record in &result.trace {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            record.iteration,
            record.evaluations,
            fmt_real(record.best_value),
            record.mode
        );
    }
    write_file(path, &out)
}

/// Writes the comparison-table CSV: one row per experiment with success rate
/// and evaluation statistics.
pub fn emit_summary_table(
    summaries: &[ExperimentSummary],
    path: &Path,
) -> Result<(), HarnessError> {
    let mut out = String::new();
    out.push_str(
        "function,dim,algorithm,runs,success_rate,mean_evaluations,std_evaluations,\
         min_evaluations,median_evaluations,max_evaluations\n",
    );
    for s in summaries {
        let stats = s.evals.map_or_else(
            || ",,,,".to_string(),
            |e| {
                format!(
                    "{},{},{},{},{}",
                    fmt_real(e.mean),
                    fmt_real(e.std),
                    e.min,
                    fmt_real(e.median),
                    e.max
                )
            },
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.function,
            s.dim,
            s.algorithm,
            s.runs,
            fmt_real(s.success_rate),
            stats
        );
    }
    write_file(path, &out)
}

fn summary_line(s: &ExperimentSummary) -> String {
    let stats = s.evals.map_or_else(
        || "evals n/a (no successful runs)".to_string(),
        |e| {
            format!(
                "mean_evals={:.1} std={:.1} min={} median={:.1} max={}",
                e.mean, e.std, e.min, e.median, e.max
            )
        },
    );
    format!(
        "{:7} {} dim={} runs={} success={}/{} ({:.1}%) {}",
        s.algorithm.to_string(),
        s.function,
        s.dim,
        s.runs,
        s.successes,
        s.runs,
        100.0 * s.success_rate,
        stats
    )
}

fn comparison_line(c: &ComparisonReport) -> String {
    let direction = if c.mean_delta < 0.0 {
        format!("{} earlier", c.left_algorithm)
    } else if c.mean_delta > 0.0 {
        format!("{} earlier", c.right_algorithm)
    } else {
        "even".to_string()
    };
    format!(
        "compare {} dim={}: {}_mean={:.1} {}_mean={:.1} delta={:+.1} ({}) wins: {}={} {}={} ties={}",
        c.function,
        c.dim,
        c.left_algorithm,
        c.left_mean_evaluations,
        c.right_algorithm,
        c.right_mean_evaluations,
        c.mean_delta,
        direction,
        c.left_algorithm,
        c.left_wins,
        c.right_algorithm,
        c.right_wins,
        c.ties
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmChoice {
    Hoopoe,
    Cuckoo,
    Both,
}

/// Benchmark runner for the hoopoe and cuckoo-search optimizers.
#[derive(Debug, Parser)]
#[command(name = "hoopoe", version, about)]
struct Cli {
    /// Benchmark function: dejong, rosenbrock, ackley or rastrigin.
    #[arg(long)]
    function: String,
    /// Search-space dimension; defaults to the function's registered
    /// dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Which algorithm(s) to run; `both` also prints the paired comparison.
    #[arg(long, value_enum, default_value_t = AlgorithmChoice::Both)]
    algorithm: AlgorithmChoice,
    /// Independent runs per algorithm (run i uses seed `seed + i`).
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Base seed of the run schedule.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Evaluation budget per run.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Absolute success tolerance above the known optimum.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Intensification threshold on the closed region fraction (hoopoe).
    #[arg(long, default_value_t = hoopoe::DEFAULT_INTENSIFY_THRESHOLD)]
    theta: f64,
    /// Archive size (hoopoe) and nest count (cuckoo).
    #[arg(long, default_value_t = hoopoe::DEFAULT_POPULATION_SIZE)]
    pop: usize,
    /// Probe radius; defaults to a fraction of the domain width.
    #[arg(long)]
    radius: Option<f64>,
    /// Probes per region (hoopoe).
    #[arg(long, default_value_t = DEFAULT_PROBES_PER_REGION)]
    probes: usize,
    /// Success-probability threshold above which a dig fires (hoopoe).
    #[arg(long, default_value_t = DEFAULT_DIG_THRESHOLD)]
    dig_threshold: f64,
    /// Evaluations allotted to one dig; defaults to a per-dimension budget.
    #[arg(long)]
    dig_budget: Option<u64>,
    /// Radius contraction applied when a dig round fails to improve
    /// (hoopoe).
    #[arg(long, default_value_t = DEFAULT_SHRINK_FACTOR)]
    shrink: f64,
    /// Lévy step scale. For hoopoe this is an absolute length (default: a
    /// fraction of the domain width); for cuckoo it is dimensionless, as
    /// flights scale with the distance to the best nest (default: 0.01).
    #[arg(long)]
    alpha: Option<f64>,
    /// Tail exponent of the Lévy step law, in (1, 3].
    #[arg(long, default_value_t = DEFAULT_TAIL_EXPONENT)]
    lambda: f64,
    /// Abandonment fraction (cuckoo).
    #[arg(long, default_value_t = cuckoo::DEFAULT_ABANDON_FRACTION)]
    pa: f64,
    /// Write per-run results as CSV; with `both`, the algorithm name is
    /// inserted before the extension.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the trace of the first run as CSV; same naming rule as --out.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

/// Inserts the algorithm name before the file extension when both
/// algorithms write outputs.
fn algorithm_path(base: &Path, algorithm: Algorithm, split: bool) -> PathBuf {
    if !split {
        return base.to_path_buf();
    }
    let stem = base.file_stem().unwrap_or_default().to_string_lossy();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{algorithm}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{algorithm}"),
    };
    base.with_file_name(name)
}

fn build_spec(cli: &Cli, algorithm: Algorithm) -> Result<ExperimentSpec, HarnessError> {
    let bench: BenchmarkSpec = benchfns::registry(&cli.function, cli.dim)?;
    let bounds = bench.objective.bounds();
    let config = match algorithm {
        Algorithm::Hoopoe => {
            let alpha = cli
                .alpha
                .unwrap_or(DEFAULT_SCALE_FRACTION * bounds.mean_width());
            let radius = cli
                .radius
                .unwrap_or(DEFAULT_RADIUS_FRACTION * bounds.mean_width());
            let probe = ProbeParams::new(
                radius,
                cli.probes,
                cli.dig_threshold,
                cli.dig_budget
                    .unwrap_or(DEFAULT_DIG_EVALS_PER_DIM * bench.dim as u64),
                cli.shrink,
            )?;
            AlgorithmConfig::Hoopoe(HoopoeConfig {
                population_size: cli.pop,
                intensify_threshold: cli.theta,
                levy: LevyParams::new(alpha, cli.lambda)?,
                probe,
                max_evaluations: cli.budget,
                target_value: bench.optimum_value,
                target_tolerance: cli.tolerance,
                seed: cli.seed,
            })
        }
        Algorithm::Cuckoo => AlgorithmConfig::Cuckoo(CuckooConfig {
            nests: cli.pop,
            abandon_fraction: cli.pa,
            levy: LevyParams::new(
                cli.alpha.unwrap_or(cuckoo::DEFAULT_FLIGHT_SCALE),
                cli.lambda,
            )?,
            max_evaluations: cli.budget,
            target_value: bench.optimum_value,
            target_tolerance: cli.tolerance,
            seed: cli.seed,
        }),
    };
    Ok(ExperimentSpec {
        function: bench.name.to_string(),
        dim: bench.dim,
        runs: cli.runs,
        base_seed: cli.seed,
        config,
        success_tolerance: cli.tolerance,
    })
}

/// Re-runs the first seed to capture its full trace; run results are pure
/// functions of the config, so this replays what the experiment measured.
fn first_run_trace(spec: &ExperimentSpec) -> Result<RunResult, HarnessError> {
    let bench = benchfns::registry(&spec.function, Some(spec.dim))?;
    let config = spec
        .config
        .for_run(spec.base_seed, bench.optimum_value, spec.success_tolerance);
    let result = match &config {
        AlgorithmConfig::Hoopoe(c) => hoopoe::run(c, &bench.objective)?,
        AlgorithmConfig::Cuckoo(c) => cuckoo::run(c, &bench.objective)?,
    };
    Ok(result)
}

fn run_cli(cli: &Cli) -> Result<(), HarnessError> {
    let algorithms: &[Algorithm] = match cli.algorithm {
        AlgorithmChoice::Hoopoe => &[Algorithm::Hoopoe],
        AlgorithmChoice::Cuckoo => &[Algorithm::Cuckoo],
        AlgorithmChoice::Both => &[Algorithm::Hoopoe, Algorithm::Cuckoo],
    };
    let split = algorithms.len() > 1;

    let mut summaries = Vec::new();
    for &algorithm in algorithms {
        let spec = build_spec(cli, algorithm)?;
        let summary = run_experiment(&spec)?;
        println!("{}", summary_line(&summary));
        if let Some(out) = &cli.out {
            emit_csv(&summary, &algorithm_path(out, algorithm, split))?;
        }
        if let Some(trace_out) = &cli.trace_out {
            let result = first_run_trace(&spec)?;
            emit_trace(&result, &algorithm_path(trace_out, algorithm, split))?;
        }
        summaries.push(summary);
    }

    if let [hoopoe_summary, cuckoo_summary] = summaries.as_slice() {
        let report = compare(hoopoe_summary, cuckoo_summary)?;
        println!("{}", comparison_line(&report));
    }
    Ok(())
}

/// CLI entry point: parses `argv`, runs the experiment(s), writes outputs,
/// prints summary lines. Returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_spec(algorithm: Algorithm, runs: usize, base_seed: u64) -> ExperimentSpec {
        let bench = benchfns::registry("dejong", Some(2)).unwrap();
        let config = match algorithm {
            Algorithm::Hoopoe => AlgorithmConfig::Hoopoe(HoopoeConfig::recommended(
                &bench.objective,
                10_000,
                0.0,
                1e-6,
                0,
            )),
            Algorithm::Cuckoo => AlgorithmConfig::Cuckoo(CuckooConfig::recommended(
                &bench.objective,
                10_000,
                0.0,
                1e-6,
                0,
            )),
        };
        ExperimentSpec {
            function: "dejong".to_string(),
            dim: 2,
            runs,
            base_seed,
            config,
            success_tolerance: 1e-6,
        }
    }

    #[test]
    fn single_run_summary_mirrors_the_run_result() {
        let spec = desk_spec(Algorithm::Hoopoe, 1, 7);
        let summary = run_experiment(&spec).unwrap();
        assert_eq!(summary.records.len(), 1);
        let bench = benchfns::registry("dejong", Some(2)).unwrap();
        let config = spec.config.for_run(7, 0.0, 1e-6);
        let direct = match &config {
            AlgorithmConfig::Hoopoe(c) => hoopoe::run(c, &bench.objective).unwrap(),
            AlgorithmConfig::Cuckoo(c) => cuckoo::run(c, &bench.objective).unwrap(),
        };
        let record = &summary.records[0];
        assert_eq!(record.seed, 7);
        assert_eq!(record.success, direct.success);
        assert_eq!(record.best_value, direct.best.value);
        assert_eq!(record.evaluations, direct.evaluations_used);
        assert_eq!(record.mode_switch_iteration, direct.mode_switch_iteration);
    }

    #[test]
    fn success_rate_is_an_exact_integer_ratio() {
        let spec = desk_spec(Algorithm::Cuckoo, 8, 3);
        let summary = run_experiment(&spec).unwrap();
        assert_eq!(
            summary.success_rate,
            summary.successes as f64 / summary.runs as f64
        );
        assert_eq!(summary.records.len(), 8);
        for (i, r) in summary.records.iter().enumerate() {
            assert_eq!(r.seed, 3 + i as u64);
        }
    }

    #[test]
    fn unknown_function_fails_before_any_run() {
        let mut spec = desk_spec(Algorithm::Hoopoe, 2, 0);
        spec.function = "nosuch".to_string();
        let err = run_experiment(&spec).unwrap_err();
        assert!(err.to_string().contains("nosuch"));
    }

    #[test]
    fn invalid_config_fails_before_any_run() {
        let mut spec = desk_spec(Algorithm::Hoopoe, 2, 0);
        if let AlgorithmConfig::Hoopoe(c) = &mut spec.config {
            c.population_size = 0;
        }
        assert!(matches!(
            run_experiment(&spec),
            Err(HarnessError::Config(ConfigError::EmptyPopulation))
        ));
    }

    #[test]
    fn comparison_is_antisymmetric() {
        let hoopoe_summary = run_experiment(&desk_spec(Algorithm::Hoopoe, 12, 5)).unwrap();
        let cuckoo_summary = run_experiment(&desk_spec(Algorithm::Cuckoo, 12, 5)).unwrap();
        let forward = compare(&hoopoe_summary, &cuckoo_summary).unwrap();
        let backward = compare(&cuckoo_summary, &hoopoe_summary).unwrap();
        assert_eq!(forward.mean_delta, -backward.mean_delta);
        assert_eq!(forward.left_wins, backward.right_wins);
        assert_eq!(forward.right_wins, backward.left_wins);
        assert_eq!(forward.ties, backward.ties);
    }

    #[test]
    fn identical_summaries_compare_even() {
        let summary = run_experiment(&desk_spec(Algorithm::Hoopoe, 6, 1)).unwrap();
        let report = compare(&summary, &summary).unwrap();
        assert_eq!(report.mean_delta, 0.0);
        assert_eq!(report.left_wins, report.right_wins);
        assert_eq!(report.ties, 6);
    }

    #[test]
    fn mismatched_conditions_are_rejected() {
        let a = run_experiment(&desk_spec(Algorithm::Hoopoe, 4, 1)).unwrap();
        let mut b = run_experiment(&desk_spec(Algorithm::Cuckoo, 4, 1)).unwrap();
        b.base_seed = 2;
        let err = compare(&a, &b).unwrap_err();
        assert!(err.to_string().contains("base_seed"));
    }

    #[test]
    fn paired_ranking_prefers_success_then_evaluations() {
        let ok = |evals: u64| RunRecord {
            seed: 0,
            success: true,
            best_value: 1e-9,
            evaluations: evals,
            mode_switch_iteration: None,
        };
        let failed = |best: f64| RunRecord {
            seed: 0,
            success: false,
            best_value: best,
            evaluations: 1000,
            mode_switch_iteration: None,
        };
        assert_eq!(rank_pair(&ok(10), &ok(20)), Ordering::Less);
        assert_eq!(rank_pair(&ok(20), &ok(10)), Ordering::Greater);
        assert_eq!(rank_pair(&ok(10), &ok(10)), Ordering::Equal);
        assert_eq!(rank_pair(&ok(9999), &failed(1e-8)), Ordering::Less);
        assert_eq!(rank_pair(&failed(0.5), &failed(0.9)), Ordering::Less);
    }
}
