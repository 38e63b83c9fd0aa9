use thiserror::Error;

/// Errors raised by model construction, simulation, fitting and diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HawkesError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("excitation kernel is not integrable (power-law exponent p = {p} <= 1)")]
    NonIntegrableKernel { p: f64 },

    #[error("model is not stationary (branching ratio {branching_ratio} >= 1)")]
    NonStationary { branching_ratio: f64 },

    #[error("elapsed time must be positive, got {0}")]
    NonPositiveElapsed(f64),

    #[error("time {t} outside observation window [0, {horizon}]")]
    OutOfWindow { t: f64, horizon: f64 },

    #[error("invalid event sequence: {0}")]
    InvalidEvents(String),

    #[error("component index {index} out of range for {dimension}-dimensional model")]
    ComponentOutOfRange { index: usize, dimension: usize },

    #[error("rate function exceeded its bound: rate {rate} > bound {bound} at t = {t}")]
    BoundViolation { t: f64, rate: f64, bound: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("empty input")]
    EmptyInput,
}

pub type Result<T> = std::result::Result<T, HawkesError>;
