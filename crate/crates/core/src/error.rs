use thiserror::Error;

/// Which moment of the distribution was requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    Mean,
    Variance,
}

impl std::fmt::Display for Moment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Moment::Mean => f.write_str("mean"),
            Moment::Variance => f.write_str("variance"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {x} is outside the domain")]
    Domain { func: &'static str, x: f64 },

    #[error("{func}: no convergence after {iterations} iterations")]
    NonConvergence { func: &'static str, iterations: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{moment} is undefined for shape alpha = {alpha}")]
    UndefinedMoment { moment: Moment, alpha: f64 },

    #[error("sample value #{index} ({value}) is not a positive finite number")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("at least 2 observations are required, got {n}")]
    InsufficientData { n: usize },

    #[error("degenerate sample: zero variance")]
    DegenerateSample,

    #[error("posterior has no interior maximum (w1 = {w1}, w2 = {w2})")]
    InvalidPosterior { w1: f64, w2: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(
        "rank-sum test needs both groups nonempty and at least {min} observations combined, got {nx} + {ny}"
    )]
    SampleSize { nx: usize, ny: usize, min: usize },

    #[error("invalid experiment configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
