use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::error::Error;
use crate::graph::VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Aapc,
    Eaapc,
    GreedyMc,
    SteadyState,
    Degree,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Aapc,
        Algorithm::Eaapc,
        Algorithm::GreedyMc,
        Algorithm::SteadyState,
        Algorithm::Degree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Aapc => "aapc",
            Algorithm::Eaapc => "eaapc",
            Algorithm::GreedyMc => "greedy-mc",
            Algorithm::SteadyState => "steady-state",
            Algorithm::Degree => "degree",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown algorithm {s:?}")))
    }
}

/// Parameters a selector ran with, kept alongside its result.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SelectionConfig {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub lazy: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedSelectionResult {
    pub algorithm: Algorithm,
    /// Seeds in the order they were picked.
    pub seeds: Vec<VertexId>,
    /// Selector's own estimate of the spread after each pick. Empty for
    /// selectors without an objective (degree).
    pub marginal_estimates: Vec<f64>,
    pub wall_time: Duration,
    pub config: SelectionConfig,
}

pub(crate) fn validate_k(k: usize) -> Result<(), Error> {
    if k == 0 {
        Err(Error::validation("k must be at least 1"))
    } else {
        Ok(())
    }
}
