use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        error_bound: f64,
    },

    #[error("invalid Fox H specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sample {index} has non-positive or non-finite value {value}")]
    Data { index: usize, value: f64 },

    #[error("degenerate mixture component: {0}")]
    Degenerate(String),

    #[error("cannot build histogram: {0}")]
    Histogram(String),

    #[error("score undefined: {0}")]
    UndefinedScore(String),

    #[error("M-step failed: {0}")]
    MStep(String),

    #[error("fit failed: {0}")]
    FitFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
