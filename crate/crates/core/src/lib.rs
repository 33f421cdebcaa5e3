//! Late-acceptance local search.
//!
//! Four acceptance strategies share one iteration loop ([`search`]):
//! hill climbing, late acceptance hill climbing, step counting hill climbing
//! and diversified late acceptance search. Problems plug in through the
//! [`Problem`] trait; symmetric Euclidean TSP ([`tsp`]) and the quadratic
//! assignment problem ([`qap`]) ship with the crate. The [`harness`] module
//! runs multi-seed experiments and reports the usual comparison metrics.

pub mod error;
pub mod fitness;
pub mod harness;
pub mod problem;
pub mod qap;
pub mod rng;
pub mod search;
pub mod strategy;
pub mod tsp;

pub use error::{ConfigError, HarnessError, ParseError, StatsError};
pub use fitness::{Fitness, FitnessArray};
pub use problem::Problem;
pub use qap::{Assignment, QapInstance, SwapMove};
pub use search::{
    run_search, run_search_observed, IterationView, Observer, SearchOptions, SearchOutcome,
    StallRule, Termination, TracePoint,
};
pub use strategy::{StrategyConfig, StrategyKind, StrategyState};
pub use tsp::{EdgeWeightKind, ReversalMove, Tour, TspInstance};
