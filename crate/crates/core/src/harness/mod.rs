//! Multi-run experiments: loading instances, running seeds of several
//! strategies, aggregating metrics, significance tests and output files.

pub mod calibrate;
pub mod experiment;
pub mod export;
pub mod registry;
pub mod spec;
pub mod stats;

pub use calibrate::{calibrate_cutoff, calibrate_instance, Calibration, CalibrationConfig};
pub use experiment::{
    aggregate, run_experiment, run_experiment_on, AggregateRow, Comparison, ExperimentResult,
    RunRecord,
};
pub use export::{export_results, read_runs_csv, write_runs_csv, write_traces, OutputFormat};
pub use spec::{ExperimentSpec, Instance, ProblemKind};
pub use stats::{welch_t_test, WelchTest};
