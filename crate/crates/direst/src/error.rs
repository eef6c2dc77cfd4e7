use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function (e.g. `ln_gamma(-1)`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid argument (bad axis, `m < M`, empty list, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The size prior places no mass on any `m` large enough to explain the
    /// number of occupied bins.
    #[error("support exhausted: {0}")]
    SupportExhausted(String),

    /// Coincidence-based estimator invoked on a dataset with no coincidences.
    #[error("no coincidences: every observed sample fell in a distinct bin")]
    NoCoincidences,

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
