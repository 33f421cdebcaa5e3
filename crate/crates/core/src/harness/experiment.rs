use rayon::prelude::*;
use rayon::ThreadPoolBuilder;
use serde::Serialize;

use crate::error::HarnessError;
use crate::fitness::Fitness;
use crate::harness::spec::{ExperimentSpec, Instance};
use crate::harness::stats::{mean, welch_t_test};
use crate::problem::Problem;
use crate::rng::derive_seed;
use crate::search::{run_search, SearchOptions, SearchOutcome, TracePoint};
use crate::strategy::StrategyConfig;

/// Confidence level of pairwise strategy comparisons.
pub const SIGNIFICANCE_CONFIDENCE: f64 = 0.95;

/// Metrics of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub strategy: StrategyConfig,
    pub run_index: usize,
    pub seed: u64,
    pub best_fitness: Fitness,
    /// `best_fitness - best_known`, when a best-known cost is available.
    pub deviation: Option<Fitness>,
    pub time_to_last_best_s: f64,
    pub hc_like_pct: f64,
    pub iterations: u64,
    pub accepted: u64,
    pub last_best_iteration: Option<u64>,
    #[serde(skip)]
    pub trace: Option<Vec<TracePoint>>,
}

impl RunRecord {
    pub fn from_outcome<S>(
        instance: &str,
        run_index: usize,
        outcome: SearchOutcome<S>,
        best_known: Option<Fitness>,
        keep_trace: bool,
    ) -> Self {
        Self {
            instance: instance.to_string(),
            strategy: outcome.strategy,
            run_index,
            seed: outcome.seed,
            best_fitness: outcome.best_fitness,
            deviation: best_known.map(|b| outcome.best_fitness - b),
            time_to_last_best_s: outcome.time_to_last_best.as_secs_f64(),
            hc_like_pct: outcome.hc_like_pct(),
            iterations: outcome.iterations,
            accepted: outcome.accepted,
            last_best_iteration: outcome.last_best_iteration,
            trace: keep_trace.then_some(outcome.trace),
        }
    }
}

/// Welch comparison of one strategy's final costs against another's.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub other: StrategyConfig,
    /// Negative when this strategy has the lower mean cost.
    pub t: f64,
    pub p_value: f64,
    pub significant: bool,
}

impl Comparison {
    pub fn significantly_better(&self) -> bool {
        self.significant && self.t < 0.0
    }

    pub fn significantly_worse(&self) -> bool {
        self.significant && self.t > 0.0
    }
}

/// Per-strategy means over its runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub instance: String,
    pub strategy: StrategyConfig,
    pub runs: usize,
    pub mean_best_fitness: f64,
    pub mean_deviation: Option<f64>,
    pub mean_time_to_last_best_s: f64,
    pub mean_hc_like_pct: f64,
    pub mean_iterations: f64,
    /// Empty when fewer than two runs were made.
    pub comparisons: Vec<Comparison>,
}

impl AggregateRow {
    /// Significantly better than every other strategy in the experiment.
    pub fn is_winner(&self) -> bool {
        !self.comparisons.is_empty()
            && self
                .comparisons
                .iter()
                .all(Comparison::significantly_better)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub instance: String,
    pub best_known: Option<Fitness>,
    /// False when every run stopped on an iteration budget, in which case
    /// timing columns carry no reproducible information.
    pub wall_clock: bool,
    /// Ordered by strategy (spec order), then run index.
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<AggregateRow>,
}

/// Runs `spec.runs` seeds of every strategy on the spec's instance, using up
/// to `workers` threads. Run `i` of every strategy uses the same derived
/// seed, and record order does not depend on scheduling.
pub fn run_experiment(
    spec: &ExperimentSpec,
    workers: usize,
) -> Result<ExperimentResult, HarnessError> {
    let instance = Instance::load(&spec.instance, spec.kind)?;
    run_experiment_on(spec, &instance, workers)
}

/// As [`run_experiment`] but with an already loaded instance.
pub fn run_experiment_on(
    spec: &ExperimentSpec,
    instance: &Instance,
    workers: usize,
) -> Result<ExperimentResult, HarnessError> {
    spec.termination.validate()?;
    let name = instance.name().to_string();
    let best_known = spec.resolve_best_known(&name);
    let keep_trace = spec.trace_dir.is_some() || spec.trace_period.is_some();
    let options = SearchOptions {
        trace_period: keep_trace.then(|| {
            spec.trace_period
                .unwrap_or(crate::search::DEFAULT_TRACE_PERIOD)
        }),
    };

    let jobs: Vec<(StrategyConfig, usize)> = spec
        .strategies
        .iter()
        .flat_map(|s| (0..spec.runs).map(move |i| (*s, i)))
        .collect();

    let run_job =
        |&(strategy, index): &(StrategyConfig, usize)| -> Result<RunRecord, HarnessError> {
            let seed = derive_seed(spec.base_seed, index as u64);
            Ok(match instance {
                Instance::Tsp(p) => record(
                    p, &name, strategy, index, seed, spec, &options, best_known, keep_trace,
                )?,
                Instance::Qap(p) => record(
                    p, &name, strategy, index, seed, spec, &options, best_known, keep_trace,
                )?,
            })
        };

    let records = if workers <= 1 {
        jobs.iter().map(run_job).collect::<Result<Vec<_>, _>>()?
    } else {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| HarnessError::Spec(format!("workers: {e}")))?;
        pool.install(|| jobs.par_iter().map(run_job).collect::<Result<Vec<_>, _>>())?
    };

    let aggregates = aggregate(&records, &spec.strategies);
    Ok(ExperimentResult {
        instance: name,
        best_known,
        wall_clock: spec.termination.is_wall_clock(),
        records,
        aggregates,
    })
}

#[allow(clippy::too_many_arguments)]
fn record<P: Problem>(
    problem: &P,
    name: &str,
    strategy: StrategyConfig,
    index: usize,
    seed: u64,
    spec: &ExperimentSpec,
    options: &SearchOptions,
    best_known: Option<Fitness>,
    keep_trace: bool,
) -> Result<RunRecord, HarnessError> {
    let outcome = run_search(problem, &strategy, &spec.termination, seed, options)?;
    Ok(RunRecord::from_outcome(
        name, index, outcome, best_known, keep_trace,
    ))
}

/// Means per strategy plus pairwise Welch tests on final cost.
pub fn aggregate(records: &[RunRecord], strategies: &[StrategyConfig]) -> Vec<AggregateRow> {
    let samples: Vec<Vec<f64>> = strategies
        .iter()
        .map(|s| {
            records
                .iter()
                .filter(|r| r.strategy == *s)
                .map(|r| r.best_fitness as f64)
                .collect()
        })
        .collect();

    strategies
        .iter()
        .enumerate()
        .filter(|(i, _)| !samples[*i].is_empty())
        .map(|(i, s)| {
            let mine: Vec<&RunRecord> = records.iter().filter(|r| r.strategy == *s).collect();
            let col = |f: &dyn Fn(&RunRecord) -> f64| {
                mean(&mine.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            let mean_deviation = if mine.iter().all(|r| r.deviation.is_some()) {
                Some(col(&|r| r.deviation.unwrap_or_default() as f64))
            } else {
                None
            };
            let comparisons = strategies
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i && !samples[*j].is_empty())
                .filter_map(|(j, other)| {
                    welch_t_test(&samples[i], &samples[j], SIGNIFICANCE_CONFIDENCE)
                        .ok()
                        .map(|w| Comparison {
                            other: *other,
                            t: w.t,
                            p_value: w.p_value,
                            significant: w.significant,
                        })
                })
                .collect();
            AggregateRow {
                instance: mine[0].instance.clone(),
                strategy: *s,
                runs: mine.len(),
                mean_best_fitness: col(&|r| r.best_fitness as f64),
                mean_deviation,
                mean_time_to_last_best_s: col(&|r| r.time_to_last_best_s),
                mean_hc_like_pct: col(&|r| r.hc_like_pct),
                mean_iterations: col(&|r| r.iterations as f64),
                comparisons,
            }
        })
        .collect()
}
