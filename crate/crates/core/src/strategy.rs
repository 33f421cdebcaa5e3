//! Acceptance and replacement rules for hill climbing and its
//! late-acceptance relatives.
//!
//! Each rule is a free function over plain fitness values so it can be
//! tested in isolation; [`StrategyState`] strings them together into the
//! per-iteration bookkeeping used by the search loop.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::fitness::{Fitness, FitnessArray};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    /// Hill climbing.
    Hc,
    /// Late acceptance hill climbing.
    Lahc,
    /// Step counting hill climbing.
    Schc,
    /// Diversified late acceptance search.
    Dlas,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [Self::Hc, Self::Lahc, Self::Schc, Self::Dlas];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hc => "HC",
            Self::Lahc => "LAHC",
            Self::Schc => "SCHC",
            Self::Dlas => "DLAS",
        }
    }

    /// Whether the strategy reads its history length.
    pub fn uses_history(self) -> bool {
        !matches!(self, Self::Hc)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hc" => Ok(Self::Hc),
            "lahc" => Ok(Self::Lahc),
            "schc" => Ok(Self::Schc),
            "dlas" => Ok(Self::Dlas),
            _ => Err(ConfigError::UnknownStrategy(s.to_string())),
        }
    }
}

/// A strategy with its history length (fitness array length for LAHC and
/// DLAS, counter limit for SCHC, ignored by HC).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    pub history_length: usize,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind, history_length: usize) -> Result<Self, ConfigError> {
        if history_length == 0 {
            return Err(ConfigError::ZeroHistoryLength);
        }
        Ok(Self {
            kind,
            history_length,
        })
    }

    pub fn hc() -> Self {
        Self {
            kind: StrategyKind::Hc,
            history_length: 1,
        }
    }

    pub fn lahc(history_length: usize) -> Result<Self, ConfigError> {
        Self::new(StrategyKind::Lahc, history_length)
    }

    pub fn schc(counter_limit: usize) -> Result<Self, ConfigError> {
        Self::new(StrategyKind::Schc, counter_limit)
    }

    pub fn dlas(history_length: usize) -> Result<Self, ConfigError> {
        Self::new(StrategyKind::Dlas, history_length)
    }

    /// Short label such as `DLAS(L=5)`; HC has no parameter.
    pub fn label(&self) -> String {
        match self.kind {
            StrategyKind::Hc => "HC".to_string(),
            k => format!("{k}(L={})", self.history_length),
        }
    }
}

impl fmt::Display for StrategyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accept non-worsening candidates.
#[inline]
pub fn hc_accept(candidate: Fitness, current: Fitness) -> bool {
    candidate <= current
}

/// Accept if non-worsening or strictly better than the history slot.
#[inline]
pub fn lahc_accept(candidate: Fitness, current: Fitness, slot: Fitness) -> bool {
    candidate <= current || candidate < slot
}

/// Accept sideways moves or anything strictly below the array maximum.
#[inline]
pub fn dlas_accept(candidate: Fitness, current: Fitness, array_max: Fitness) -> bool {
    candidate == current || candidate < array_max
}

/// Whether DLAS writes the new current fitness into the history slot.
#[inline]
pub fn dlas_replace_decision(current: Fitness, previous: Fitness, slot: Fitness) -> bool {
    current > slot || (current < slot && current < previous)
}

/// Accept if non-worsening or strictly below the SCHC bound.
#[inline]
pub fn schc_accept(candidate: Fitness, current: Fitness, bound: Fitness) -> bool {
    candidate <= current || candidate < bound
}

/// Whether the SCHC bound is reset at the end of iteration `iteration`
/// (zero-based): once every `counter_limit` iterations.
#[inline]
pub fn schc_resets_bound(iteration: u64, counter_limit: usize) -> bool {
    (iteration + 1).is_multiple_of(counter_limit as u64)
}

/// One SCHC iteration: the acceptance decision for `candidate`, and the
/// bound after the end-of-iteration reset.
pub fn schc_step(
    candidate: Fitness,
    current: Fitness,
    bound: Fitness,
    counter_limit: usize,
    iteration: u64,
) -> (bool, Fitness) {
    let accept = schc_accept(candidate, current, bound);
    let new_current = if accept { candidate } else { current };
    let bound = if schc_resets_bound(iteration, counter_limit) {
        new_current
    } else {
        bound
    };
    (accept, bound)
}

/// An iteration is HC-like when the strategy's worsening-acceptance
/// threshold has collapsed onto the best fitness found so far.
/// HC is HC-like in every iteration.
#[inline]
pub fn hc_like_flag(kind: StrategyKind, threshold: Fitness, best: Fitness) -> bool {
    match kind {
        StrategyKind::Hc => true,
        _ => threshold == best,
    }
}

/// Per-run acceptance memory of a strategy.
#[derive(Debug, Clone)]
pub enum StrategyState {
    Hc,
    Lahc(FitnessArray),
    Schc {
        bound: Fitness,
        counter_limit: usize,
    },
    Dlas(FitnessArray),
}

impl StrategyState {
    /// Fresh state for a run whose initial fitness is `initial`.
    pub fn new(config: &StrategyConfig, initial: Fitness) -> Self {
        match config.kind {
            StrategyKind::Hc => Self::Hc,
            StrategyKind::Lahc => Self::Lahc(FitnessArray::new(config.history_length, initial)),
            StrategyKind::Schc => Self::Schc {
                bound: initial,
                counter_limit: config.history_length,
            },
            StrategyKind::Dlas => Self::Dlas(FitnessArray::new(config.history_length, initial)),
        }
    }

    pub fn kind(&self) -> StrategyKind {
        match self {
            Self::Hc => StrategyKind::Hc,
            Self::Lahc(_) => StrategyKind::Lahc,
            Self::Schc { .. } => StrategyKind::Schc,
            Self::Dlas(_) => StrategyKind::Dlas,
        }
    }

    #[inline]
    pub fn accepts(&self, candidate: Fitness, current: Fitness, iteration: u64) -> bool {
        match self {
            Self::Hc => hc_accept(candidate, current),
            Self::Lahc(array) => {
                lahc_accept(candidate, current, array.get(array.slot_for(iteration)))
            }
            Self::Schc { bound, .. } => schc_accept(candidate, current, *bound),
            Self::Dlas(array) => dlas_accept(candidate, current, array.max_value()),
        }
    }

    /// End-of-iteration update once acceptance has been resolved.
    /// `current` is the fitness after acceptance, `previous` the fitness at
    /// the start of the iteration.
    #[inline]
    pub fn update(&mut self, current: Fitness, previous: Fitness, iteration: u64) {
        match self {
            Self::Hc => {}
            Self::Lahc(array) => {
                let slot = array.slot_for(iteration);
                array.lahc_replace(slot, current);
            }
            Self::Schc {
                bound,
                counter_limit,
            } => {
                if schc_resets_bound(iteration, *counter_limit) {
                    *bound = current;
                }
            }
            Self::Dlas(array) => {
                let slot = array.slot_for(iteration);
                array.dlas_replace(slot, current, previous);
            }
        }
    }

    /// Largest fitness a worsening move may reach and still be considered:
    /// max of the history array, or the SCHC bound. `None` for HC.
    #[inline]
    pub fn threshold(&self) -> Option<Fitness> {
        match self {
            Self::Hc => None,
            Self::Lahc(array) | Self::Dlas(array) => Some(array.max_value()),
            Self::Schc { bound, .. } => Some(*bound),
        }
    }

    #[inline]
    pub fn is_hc_like(&self, best: Fitness) -> bool {
        match self.threshold() {
            None => true,
            Some(t) => hc_like_flag(self.kind(), t, best),
        }
    }

    pub fn history(&self) -> Option<&FitnessArray> {
        match self {
            Self::Lahc(array) | Self::Dlas(array) => Some(array),
            _ => None,
        }
    }
}
