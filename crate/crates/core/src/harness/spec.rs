//! Experiment descriptions and instance loading.
//!
//! A spec file is TOML:
//!
//! ```toml
//! instance = "pr1002.tsp"     # relative to the spec file
//! kind = "tsp"                # optional, inferred from .tsp / .dat
//! runs = 10
//! cutoff_seconds = 30.0       # and/or iteration_budget
//! base_seed = 1
//! trace_period = 1000         # optional
//!
//! [[strategy]]
//! kind = "dlas"
//! L = 5
//!
//! [[strategy]]
//! kind = "lahc"               # L defaults to 50000
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Deserialize;

use crate::error::{ConfigError, HarnessError};
use crate::fitness::Fitness;
use crate::harness::registry;
use crate::qap::QapInstance;
use crate::search::Termination;
use crate::strategy::{StrategyConfig, StrategyKind};
use crate::tsp::TspInstance;

/// History length used by LAHC and SCHC when none is given.
pub const DEFAULT_LONG_HISTORY: usize = 50_000;
/// DLAS history length on TSP when none is given.
pub const DEFAULT_DLAS_TSP: usize = 5;
/// DLAS history length on QAP when none is given.
pub const DEFAULT_DLAS_QAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Tsp,
    Qap,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tsp => "tsp",
            Self::Qap => "qap",
        }
    }

    /// Guess from a file extension: `.tsp` is TSP, `.dat` is QAP.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "tsp" => Some(Self::Tsp),
            "dat" => Some(Self::Qap),
            _ => None,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsp" => Ok(Self::Tsp),
            "qap" => Ok(Self::Qap),
            _ => Err(ConfigError::UnknownProblemKind(s.to_string())),
        }
    }
}

/// Default history length of `kind` on problems of type `problem`.
pub fn default_history_length(kind: StrategyKind, problem: ProblemKind) -> usize {
    match (kind, problem) {
        (StrategyKind::Hc, _) => 1,
        (StrategyKind::Dlas, ProblemKind::Tsp) => DEFAULT_DLAS_TSP,
        (StrategyKind::Dlas, ProblemKind::Qap) => DEFAULT_DLAS_QAP,
        (StrategyKind::Lahc | StrategyKind::Schc, _) => DEFAULT_LONG_HISTORY,
    }
}

/// A loaded benchmark instance.
#[derive(Debug, Clone)]
pub enum Instance {
    Tsp(TspInstance),
    Qap(QapInstance),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Self::Tsp(_) => ProblemKind::Tsp,
            Self::Qap(_) => ProblemKind::Qap,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Tsp(t) => &t.name,
            Self::Qap(q) => &q.name,
        }
    }

    /// Reads and parses `path`. TSP instances keep their `NAME`, falling
    /// back to the file stem; QAP instances are named after the file stem.
    pub fn load(path: &Path, kind: ProblemKind) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let parse_err = |source| HarnessError::Parse {
            path: path.to_path_buf(),
            source,
        };
        Ok(match kind {
            ProblemKind::Tsp => {
                let mut inst = TspInstance::parse_tsplib(&text).map_err(parse_err)?;
                if inst.name.is_empty() {
                    inst.name = stem;
                }
                Self::Tsp(inst)
            }
            ProblemKind::Qap => Self::Qap(
                QapInstance::parse_qaplib(&text)
                    .map_err(parse_err)?
                    .with_name(stem),
            ),
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    instance: PathBuf,
    kind: Option<ProblemKind>,
    #[serde(rename = "strategy")]
    strategies: Vec<RawStrategy>,
    runs: usize,
    cutoff_seconds: Option<f64>,
    iteration_budget: Option<u64>,
    #[serde(default)]
    base_seed: u64,
    best_known: Option<Fitness>,
    trace_period: Option<u64>,
    trace_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategy {
    kind: StrategyKind,
    #[serde(rename = "L", alias = "history_length")]
    history_length: Option<usize>,
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub instance: PathBuf,
    pub kind: ProblemKind,
    pub strategies: Vec<StrategyConfig>,
    pub runs: usize,
    pub termination: Termination,
    pub base_seed: u64,
    /// Overrides the registry value when set.
    pub best_known: Option<Fitness>,
    pub trace_period: Option<u64>,
    /// Where per-run trace files go; tracing is off without it.
    pub trace_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base)
    }

    /// Parses a spec; relative paths are resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let raw: RawSpec =
            toml::from_str(text).map_err(|e| HarnessError::Spec(e.message().to_string()))?;

        let instance = base_dir.join(&raw.instance);
        let kind = match raw.kind {
            Some(k) => k,
            None => ProblemKind::from_path(&raw.instance).ok_or_else(|| {
                HarnessError::Spec(
                    "kind: cannot infer from the instance extension; set `kind`".into(),
                )
            })?,
        };
        if raw.strategies.is_empty() {
            return Err(HarnessError::Spec(
                "strategy: at least one [[strategy]] is required".into(),
            ));
        }
        let strategies = raw
            .strategies
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let l = s
                    .history_length
                    .unwrap_or_else(|| default_history_length(s.kind, kind));
                StrategyConfig::new(s.kind, l)
                    .map_err(|e| HarnessError::Spec(format!("strategy[{i}].L: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if raw.runs == 0 {
            return Err(HarnessError::Spec("runs: must be at least 1".into()));
        }

        let mut termination = Termination::default();
        if let Some(s) = raw.cutoff_seconds {
            if !(s.is_finite() && s > 0.0) {
                return Err(HarnessError::Spec(format!(
                    "cutoff_seconds: must be positive, got {s}"
                )));
            }
            termination.cutoff = Some(Duration::from_secs_f64(s));
        }
        termination.max_iterations = raw.iteration_budget;
        if termination.cutoff.is_none() && termination.max_iterations.is_none() {
            return Err(HarnessError::Spec(
                "cutoff_seconds / iteration_budget: at least one is required".into(),
            ));
        }
        if raw.trace_period == Some(0) {
            return Err(HarnessError::Spec("trace_period: must be positive".into()));
        }

        Ok(Self {
            instance,
            kind,
            strategies,
            runs: raw.runs,
            termination,
            base_seed: raw.base_seed,
            best_known: raw.best_known,
            trace_period: raw.trace_period,
            trace_dir: raw.trace_dir.map(|d| base_dir.join(d)),
        })
    }

    /// Best-known cost: the explicit override, else the registry entry for
    /// the instance name.
    pub fn resolve_best_known(&self, instance_name: &str) -> Option<Fitness> {
        self.best_known.or_else(|| {
            registry::best_known(instance_name).or_else(|| {
                self.instance
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .and_then(registry::best_known)
            })
        })
    }
}
