use std::fmt;

use serde::{Deserialize, Serialize};

/// Direction in which an objective or integrand degenerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    TowardZero,
    TowardInfinity,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::TowardZero => f.write_str("r -> 0"),
            Direction::TowardInfinity => f.write_str("r -> infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation error at t = {t:e}: {what}")]
    Evaluation { t: f64, what: String },

    /// An integral or supremum does not converge.
    #[error("divergent: {0}")]
    Divergent(String),

    #[error("infimum degenerates to 0 as {direction}")]
    DegenerateInfimum { direction: Direction },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("existence failure: {0}")]
    Existence(String),

    #[error("no candidate satisfies the majorization constraint")]
    NoFeasibleCandidate,

    #[error("empty test family")]
    EmptyFamily,

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn eval(t: f64, what: impl Into<String>) -> Self {
        Error::Evaluation { t, what: what.into() }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Error::Divergent(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
