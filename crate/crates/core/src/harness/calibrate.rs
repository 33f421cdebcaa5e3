//! Cutoff calibration: run LAHC with a long history until it has been
//! stuck on the same best for a fixed share of its running time, and take
//! the longest such run as the instance's cutoff.

use std::time::Duration;

use crate::error::{ConfigError, HarnessError};
use crate::harness::spec::{Instance, DEFAULT_LONG_HISTORY};
use crate::problem::Problem;
use crate::rng::derive_seed;
use crate::search::{run_search, SearchOptions, StallRule, Termination};
use crate::strategy::StrategyConfig;

pub const DEFAULT_TRAP_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConfig {
    pub runs: usize,
    /// Share of elapsed time without a new best that counts as trapped.
    pub trap_fraction: f64,
    /// Hard upper bound on any single run.
    pub ceiling: Duration,
    /// No run stops on the trap rule before this much time has passed.
    pub min_elapsed: Duration,
    pub history_length: usize,
    pub base_seed: u64,
}

impl CalibrationConfig {
    pub fn new(runs: usize, trap_fraction: f64, ceiling: Duration) -> Self {
        Self {
            runs,
            trap_fraction,
            ceiling,
            min_elapsed: Duration::from_millis(500).min(ceiling),
            history_length: DEFAULT_LONG_HISTORY,
            base_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.trap_fraction > 0.0 && self.trap_fraction < 1.0) {
            return Err(ConfigError::TrapFraction(self.trap_fraction));
        }
        if self.runs == 0 {
            return Err(ConfigError::field("runs", "must be at least 1"));
        }
        if self.ceiling.is_zero() {
            return Err(ConfigError::field("ceiling", "must be positive"));
        }
        if self.history_length == 0 {
            return Err(ConfigError::ZeroHistoryLength);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// Longest run, in seconds: the recommended cutoff.
    pub cutoff_s: f64,
    pub run_seconds: Vec<f64>,
}

/// Calibrates a cutoff for `problem`. Runs are sequential so they do not
/// compete for the clock.
pub fn calibrate_cutoff<P: Problem>(
    problem: &P,
    config: &CalibrationConfig,
) -> Result<Calibration, ConfigError> {
    config.validate()?;
    let strategy = StrategyConfig::lahc(config.history_length)?;
    let termination = Termination::cutoff(config.ceiling).with_stall(StallRule {
        fraction: config.trap_fraction,
        min_elapsed: config.min_elapsed,
    });
    let run_seconds = (0..config.runs)
        .map(|i| {
            let seed = derive_seed(config.base_seed, i as u64);
            run_search(
                problem,
                &strategy,
                &termination,
                seed,
                &SearchOptions::default(),
            )
            .map(|o| o.elapsed.min(config.ceiling).as_secs_f64())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cutoff_s = run_seconds.iter().copied().fold(0.0, f64::max);
    Ok(Calibration {
        cutoff_s,
        run_seconds,
    })
}

pub fn calibrate_instance(
    instance: &Instance,
    config: &CalibrationConfig,
) -> Result<Calibration, HarnessError> {
    Ok(match instance {
        Instance::Tsp(p) => calibrate_cutoff(p, config)?,
        Instance::Qap(p) => calibrate_cutoff(p, config)?,
    })
}
