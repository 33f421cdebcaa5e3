//! The generic perturb/accept/replace loop shared by all strategies.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::fitness::Fitness;
use crate::problem::Problem;
use crate::rng::rng_from_seed;
use crate::strategy::{StrategyConfig, StrategyKind, StrategyState};

/// Iterations between wall-clock reads.
const CLOCK_CHECK_INTERVAL: u64 = 128;

/// Default spacing of periodic trace points.
pub const DEFAULT_TRACE_PERIOD: u64 = 1_000;

/// Stop once the run has gone without a new best for at least `fraction`
/// of its total elapsed time, but never before `min_elapsed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StallRule {
    pub fraction: f64,
    pub min_elapsed: Duration,
}

/// When a run stops. The first limit reached wins.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Termination {
    pub max_iterations: Option<u64>,
    pub cutoff: Option<Duration>,
    pub stall: Option<StallRule>,
}

impl Termination {
    pub fn iterations(n: u64) -> Self {
        Self {
            max_iterations: Some(n),
            ..Self::default()
        }
    }

    pub fn cutoff(limit: Duration) -> Self {
        Self {
            cutoff: Some(limit),
            ..Self::default()
        }
    }

    pub fn cutoff_secs(seconds: f64) -> Result<Self, ConfigError> {
        let limit =
            Duration::try_from_secs_f64(seconds).map_err(|_| ConfigError::EmptyTermination)?;
        Ok(Self::cutoff(limit))
    }

    pub fn with_iterations(mut self, n: u64) -> Self {
        self.max_iterations = Some(n);
        self
    }

    pub fn with_stall(mut self, rule: StallRule) -> Self {
        self.stall = Some(rule);
        self
    }

    /// An iteration budget of zero is legal (the run returns its initial
    /// solution). A cutoff must be positive, and at least one of the two
    /// limits must be present.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(cutoff) = self.cutoff {
            if cutoff.is_zero() {
                return Err(ConfigError::EmptyTermination);
            }
        }
        if self.max_iterations.is_none() && self.cutoff.is_none() {
            return Err(ConfigError::EmptyTermination);
        }
        if let Some(rule) = self.stall {
            if !(rule.fraction > 0.0 && rule.fraction < 1.0) {
                return Err(ConfigError::TrapFraction(rule.fraction));
            }
        }
        Ok(())
    }

    pub fn is_wall_clock(&self) -> bool {
        self.cutoff.is_some() || self.stall.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Record a trace point every this many iterations, plus one at every new
    /// best. `None` disables tracing.
    pub trace_period: Option<u64>,
}

impl SearchOptions {
    pub fn traced(period: u64) -> Self {
        Self {
            trace_period: Some(period.max(1)),
        }
    }
}

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub elapsed_s: f64,
    pub current: Fitness,
    pub best: Fitness,
}

/// Read-only view of the loop state handed to observers after each
/// iteration's replacement step.
pub struct IterationView<'a, S> {
    pub iteration: u64,
    pub candidate: Fitness,
    pub previous: Fitness,
    pub current: Fitness,
    pub best: Fitness,
    pub accepted: bool,
    pub hc_like: bool,
    pub strategy: &'a StrategyState,
    pub current_solution: &'a S,
}

/// Per-iteration callback. The unit type observes nothing.
pub trait Observer<S> {
    fn after_iteration(&mut self, view: &IterationView<'_, S>);
}

impl<S> Observer<S> for () {
    #[inline]
    fn after_iteration(&mut self, _view: &IterationView<'_, S>) {}
}

impl<S, F: FnMut(&IterationView<'_, S>)> Observer<S> for F {
    #[inline]
    fn after_iteration(&mut self, view: &IterationView<'_, S>) {
        self(view)
    }
}

/// Result of a single run.
#[derive(Debug, Clone)]
pub struct SearchOutcome<S> {
    pub strategy: StrategyConfig,
    pub seed: u64,
    pub best_solution: S,
    pub best_fitness: Fitness,
    pub initial_fitness: Fitness,
    pub final_fitness: Fitness,
    pub iterations: u64,
    pub accepted: u64,
    pub hc_like_iterations: u64,
    /// Iteration index at which the final best was found; `None` if the
    /// initial solution was never improved.
    pub last_best_iteration: Option<u64>,
    pub time_to_last_best: Duration,
    pub elapsed: Duration,
    pub trace: Vec<TracePoint>,
}

impl<S> SearchOutcome<S> {
    /// Share of iterations flagged HC-like, in percent.
    pub fn hc_like_pct(&self) -> f64 {
        if self.iterations == 0 {
            0.0
        } else {
            100.0 * self.hc_like_iterations as f64 / self.iterations as f64
        }
    }
}

pub fn run_search<P: Problem>(
    problem: &P,
    strategy: &StrategyConfig,
    termination: &Termination,
    seed: u64,
    options: &SearchOptions,
) -> Result<SearchOutcome<P::Solution>, ConfigError> {
    run_search_observed(problem, strategy, termination, seed, options, &mut ())
}

/// Runs one search.
///
/// Iteration `k`: remember the current fitness, propose a move, evaluate the
/// candidate by delta, accept or reject it, record a strictly better best,
/// apply the strategy's replacement rule, then advance `k`.
///
/// An iteration is counted as HC-like when the strategy's threshold equals
/// the best fitness after replacement, once the search has found at least
/// one solution better than its starting point. HC counts every iteration.
pub fn run_search_observed<P: Problem, O: Observer<P::Solution>>(
    problem: &P,
    strategy: &StrategyConfig,
    termination: &Termination,
    seed: u64,
    options: &SearchOptions,
    observer: &mut O,
) -> Result<SearchOutcome<P::Solution>, ConfigError> {
    termination.validate()?;
    if strategy.history_length == 0 {
        return Err(ConfigError::ZeroHistoryLength);
    }
    problem.check()?;

    let start = Instant::now();
    let mut rng = rng_from_seed(seed);
    let mut current = problem.initial_solution(&mut rng);
    let mut fitness = problem.fitness(&current);
    let initial_fitness = fitness;
    let mut best = current.clone();
    let mut best_fitness = fitness;
    let mut state = StrategyState::new(strategy, fitness);
    let is_hc = strategy.kind == StrategyKind::Hc;

    let mut time_to_last_best = start.elapsed();
    let mut last_best_iteration = None;
    let mut accepted_count = 0u64;
    let mut hc_like_count = 0u64;
    let mut trace = Vec::new();
    let trace_period = options.trace_period;

    let max_iterations = termination.max_iterations.unwrap_or(u64::MAX);
    let mut k = 0u64;
    while k < max_iterations {
        if k.is_multiple_of(CLOCK_CHECK_INTERVAL) && termination.is_wall_clock() {
            let elapsed = start.elapsed();
            if termination.cutoff.is_some_and(|c| elapsed >= c) {
                break;
            }
            if let Some(rule) = termination.stall {
                if elapsed >= rule.min_elapsed
                    && (elapsed - time_to_last_best).as_secs_f64()
                        >= rule.fraction * elapsed.as_secs_f64()
                {
                    break;
                }
            }
        }

        let previous = fitness;
        let mv = problem.propose_move(&current, &mut rng);
        let candidate = fitness + problem.move_delta(&current, mv);
        let accepted = state.accepts(candidate, fitness, k);
        if accepted {
            problem.apply_move(&mut current, mv);
            fitness = candidate;
            accepted_count += 1;
            if fitness < best_fitness {
                best.clone_from(&current);
                best_fitness = fitness;
                last_best_iteration = Some(k);
                time_to_last_best = start.elapsed();
                if trace_period.is_some() {
                    trace.push(TracePoint {
                        iteration: k + 1,
                        elapsed_s: time_to_last_best.as_secs_f64(),
                        current: fitness,
                        best: best_fitness,
                    });
                }
            }
        }
        state.update(fitness, previous, k);

        let hc_like = is_hc || (last_best_iteration.is_some() && state.is_hc_like(best_fitness));
        if hc_like {
            hc_like_count += 1;
        }

        observer.after_iteration(&IterationView {
            iteration: k,
            candidate,
            previous,
            current: fitness,
            best: best_fitness,
            accepted,
            hc_like,
            strategy: &state,
            current_solution: &current,
        });

        k += 1;
        if let Some(period) = trace_period {
            if k.is_multiple_of(period) {
                trace.push(TracePoint {
                    iteration: k,
                    elapsed_s: start.elapsed().as_secs_f64(),
                    current: fitness,
                    best: best_fitness,
                });
            }
        }
    }

    Ok(SearchOutcome {
        strategy: *strategy,
        seed,
        best_solution: best,
        best_fitness,
        initial_fitness,
        final_fitness: fitness,
        iterations: k,
        accepted: accepted_count,
        hc_like_iterations: hc_like_count,
        last_best_iteration,
        time_to_last_best,
        elapsed: start.elapsed(),
        trace,
    })
}
