//! `dlas`: run single searches, multi-run benchmarks and cutoff calibration
//! on TSPLIB and QAPLIB instances.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 2 on invalid flags or an invalid spec, 1 on any other failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand};
use dlas_core::harness::export::{
    write_atomically, write_trace_csv, AGGREGATE_COLUMNS, RUN_COLUMNS, TRACE_COLUMNS,
};
use dlas_core::harness::registry;
use dlas_core::harness::spec::default_history_length;
use dlas_core::harness::{
    calibrate_instance, export_results, run_experiment, write_traces, AggregateRow,
    CalibrationConfig, ExperimentResult, ExperimentSpec, Instance, OutputFormat, ProblemKind,
};
use dlas_core::{
    run_search, Fitness, HarnessError, Problem, SearchOptions, SearchOutcome, StrategyConfig,
    StrategyKind, Termination,
};

#[derive(Parser, Debug)]
#[command(
    name = "dlas",
    version,
    about = "Late-acceptance local search for TSP and QAP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one search and print a single result line.
    Solve(SolveArgs),
    /// Run an experiment spec and write per-run and summary CSVs.
    Bench(BenchArgs),
    /// Estimate a cutoff by running LAHC until it stalls.
    Calibrate(CalibrateArgs),
    /// List supported instance, spec and output formats.
    Formats,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("limit").required(true).args(["cutoff_s", "iters"])))]
struct SolveArgs {
    /// TSPLIB (.tsp) or QAPLIB (.dat) file.
    instance: PathBuf,
    /// Problem type; inferred from the file extension when omitted.
    #[arg(long)]
    kind: Option<ProblemKind>,
    #[arg(long, default_value = "dlas")]
    strategy: StrategyKind,
    /// History length (counter limit for SCHC). Defaults: DLAS 5 on TSP,
    /// 10 on QAP; LAHC and SCHC 50000.
    #[arg(short = 'L', long = "history", value_parser = clap::value_parser!(u64).range(1..))]
    history: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock cutoff in seconds.
    #[arg(long, value_parser = positive_seconds)]
    cutoff_s: Option<f64>,
    /// Iteration budget.
    #[arg(long)]
    iters: Option<u64>,
    /// Best-known cost for the deviation field; looked up by instance name
    /// when omitted.
    #[arg(long)]
    best_known: Option<Fitness>,
    /// Write a trace CSV of (iteration, elapsed_s, F, F_best) here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trace_period: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Experiment spec (TOML).
    spec: PathBuf,
    /// Run table path; the summary goes next to it as `<stem>.summary.csv`.
    #[arg(long, short)]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, env = "DLAS_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    instance: PathBuf,
    #[arg(long)]
    kind: Option<ProblemKind>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// Share of elapsed time without a new best that ends a run.
    #[arg(long, default_value_t = 0.1, value_parser = open_unit_interval)]
    trap_fraction: f64,
    /// Upper bound on any single run, in seconds.
    #[arg(long, default_value_t = 600.0, value_parser = positive_seconds)]
    ceiling_s: f64,
    /// No run ends on the trap rule before this many seconds.
    #[arg(long, value_parser = positive_seconds)]
    min_elapsed_s: Option<f64>,
    #[arg(short = 'L', long = "history", default_value_t = 50_000, value_parser = clap::value_parser!(u64).range(1..))]
    history: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be a positive number of seconds, got {v}"))
    }
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("must lie strictly between 0 and 1, got {v}"))
    }
}

/// A failure together with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = match e {
            HarnessError::Spec(_) | HarnessError::Config(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<dlas_core::ConfigError> for Failure {
    fn from(e: dlas_core::ConfigError) -> Self {
        HarnessError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Calibrate(args) => calibrate(args),
        Command::Formats => {
            formats();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_kind(path: &Path, kind: Option<ProblemKind>) -> Result<ProblemKind, Failure> {
    kind.or_else(|| ProblemKind::from_path(path))
        .ok_or_else(|| Failure {
            code: 2,
            message: format!(
                "cannot infer the problem kind of {}; pass --kind tsp|qap",
                path.display()
            ),
        })
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let kind = resolve_kind(&args.instance, args.kind)?;
    let history = match args.history {
        Some(l) => l as usize,
        None => default_history_length(args.strategy, kind),
    };
    let strategy = StrategyConfig::new(args.strategy, history)?;
    let termination = match (args.cutoff_s, args.iters) {
        (Some(s), _) => Termination::cutoff_secs(s)?,
        (None, Some(n)) => Termination::iterations(n),
        (None, None) => unreachable!("clap requires one limit"),
    };
    let options = SearchOptions {
        trace_period: args.trace.as_ref().map(|_| args.trace_period),
    };

    let instance = Instance::load(&args.instance, kind)?;
    let name = instance.name().to_string();
    let best_known = args.best_known.or_else(|| {
        registry::best_known(&name).or_else(|| {
            args.instance
                .file_stem()
                .and_then(|s| s.to_str())
                .and_then(registry::best_known)
        })
    });
    let line = match &instance {
        Instance::Tsp(p) => run_one(
            p,
            &name,
            &strategy,
            &termination,
            &args,
            &options,
            best_known,
        )?,
        Instance::Qap(p) => run_one(
            p,
            &name,
            &strategy,
            &termination,
            &args,
            &options,
            best_known,
        )?,
    };
    println!("{line}");
    Ok(())
}

fn run_one<P: Problem>(
    problem: &P,
    name: &str,
    strategy: &StrategyConfig,
    termination: &Termination,
    args: &SolveArgs,
    options: &SearchOptions,
    best_known: Option<Fitness>,
) -> Result<String, Failure> {
    let outcome = run_search(problem, strategy, termination, args.seed, options)?;
    if let Some(path) = &args.trace {
        write_atomically(path, |w| write_trace_csv(&outcome.trace, w))?;
        eprintln!("trace written to {}", path.display());
    }
    Ok(result_line(name, &outcome, best_known))
}

/// `key=value` fields separated by tabs, always in the same order.
fn result_line<S>(name: &str, o: &SearchOutcome<S>, best_known: Option<Fitness>) -> String {
    let l = if o.strategy.kind.uses_history() {
        o.strategy.history_length.to_string()
    } else {
        "-".to_string()
    };
    let deviation =
        best_known.map_or_else(|| "NA".to_string(), |b| (o.best_fitness - b).to_string());
    [
        format!("instance={name}"),
        format!("strategy={}", o.strategy.kind),
        format!("L={l}"),
        format!("seed={}", o.seed),
        format!("best={}", o.best_fitness),
        format!("deviation={deviation}"),
        format!(
            "time_to_last_best_s={:.3}",
            o.time_to_last_best.as_secs_f64()
        ),
        format!("hc_like_pct={:.2}", o.hc_like_pct()),
        format!("iterations={}", o.iterations),
    ]
    .join("\t")
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let spec = ExperimentSpec::from_file(&args.spec)?;
    let result = run_experiment(&spec, args.workers as usize)?;
    for path in export_results(&result, &args.out, args.format)? {
        eprintln!("wrote {}", path.display());
    }
    if let Some(dir) = &spec.trace_dir {
        let written = write_traces(&result, dir)?;
        eprintln!("wrote {} trace files to {}", written.len(), dir.display());
    }
    print!("{}", summary_table(&result));
    Ok(())
}

/// Per-strategy means. `*` marks a strategy significantly better than every
/// other one; the last column lists the strategies it beats significantly.
fn summary_table(result: &ExperimentResult) -> String {
    let mut out = format!(
        "{} ({} runs per strategy{})\n",
        result.instance,
        result.aggregates.first().map_or(0, |a| a.runs),
        result
            .best_known
            .map_or_else(String::new, |b| format!(", best known {b}"))
    );
    out.push_str(&format!(
        "  {:<14} {:>14} {:>12} {:>10} {:>8}  {}\n",
        "strategy", "mean best", "mean dev", "time s", "HC-like%", "beats"
    ));
    for a in &result.aggregates {
        out.push_str(&summary_row(a, result.wall_clock));
    }
    out
}

fn summary_row(a: &AggregateRow, wall_clock: bool) -> String {
    let marker = if a.is_winner() { '*' } else { ' ' };
    let dev = a
        .mean_deviation
        .map_or_else(|| "-".to_string(), |d| format!("{d:.1}"));
    let time = if wall_clock {
        format!("{:.2}", a.mean_time_to_last_best_s)
    } else {
        "-".to_string()
    };
    let beats: Vec<String> = a
        .comparisons
        .iter()
        .filter(|c| c.significantly_better())
        .map(|c| c.other.label())
        .collect();
    format!(
        "{marker} {:<14} {:>14.1} {:>12} {:>10} {:>8.2}  {}\n",
        a.strategy.label(),
        a.mean_best_fitness,
        dev,
        time,
        a.mean_hc_like_pct,
        beats.join(" ")
    )
}

fn calibrate(args: CalibrateArgs) -> Result<(), Failure> {
    let kind = resolve_kind(&args.instance, args.kind)?;
    let ceiling = Duration::from_secs_f64(args.ceiling_s);
    let mut config = CalibrationConfig::new(args.runs as usize, args.trap_fraction, ceiling);
    if let Some(s) = args.min_elapsed_s {
        config.min_elapsed = Duration::from_secs_f64(s).min(ceiling);
    }
    config.history_length = args.history as usize;
    config.base_seed = args.seed;
    let instance = Instance::load(&args.instance, kind)?;
    let cal = calibrate_instance(&instance, &config)?;
    for (i, s) in cal.run_seconds.iter().enumerate() {
        eprintln!("run {i}: {s:.3} s");
    }
    println!("{:.3}", cal.cutoff_s);
    Ok(())
}

fn formats() {
    println!("instances:");
    println!(
        "  tsp  TSPLIB .tsp, TYPE TSP, EDGE_WEIGHT_TYPE EUC_2D or CEIL_2D, NODE_COORD_SECTION"
    );
    println!("  qap  QAPLIB .dat, n followed by the n x n flow and distance matrices");
    println!("strategies: hc, lahc, schc, dlas");
    println!("spec (TOML): instance, kind, runs, cutoff_seconds, iteration_budget, base_seed,");
    println!("             best_known, trace_period, trace_dir, [[strategy]] kind + L");
    println!("outputs:");
    println!("  csv    runs: {}", RUN_COLUMNS.join(","));
    println!("         summary: {}", AGGREGATE_COLUMNS.join(","));
    println!("  jsonl  one object per run and per strategy, tagged by \"type\"");
    println!("  trace  {}", TRACE_COLUMNS.join(","));
}
