use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Invalid search or experiment configuration, detected before any work.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("history length must be at least 1")]
    ZeroHistoryLength,
    #[error("unknown strategy `{0}` (expected hc, lahc, schc or dlas)")]
    UnknownStrategy(String),
    #[error("unknown problem kind `{0}` (expected tsp or qap)")]
    UnknownProblemKind(String),
    #[error("termination needs a positive cutoff or a positive iteration budget")]
    EmptyTermination,
    #[error("problem has {size} elements but its move needs at least {required}")]
    ProblemTooSmall { size: usize, required: usize },
    #[error("trap fraction must lie strictly between 0 and 1, got {0}")]
    TrapFraction(f64),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

impl ConfigError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Malformed instance file. `line` is 1-based; 0 means the error is not tied
/// to a single line (e.g. a count mismatch detected at end of input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("sample size must be at least 2, got {0}")]
    SampleTooSmall(usize),
    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    Confidence(f64),
}

/// Anything that can go wrong while running an experiment.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot open {}: {source}", path.display())]
    Open { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
