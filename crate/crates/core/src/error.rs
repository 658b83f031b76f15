use thiserror::Error;

/// Errors raised across the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input file or record.
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid or inconsistent run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Two result sets that must share a configuration do not.
    #[error("configuration mismatch: {0}")]
    Mismatch(String),

    /// The brute-force revaluation would exceed the work budget.
    #[error("brute-force work estimate {estimate:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { estimate: f64, budget: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
