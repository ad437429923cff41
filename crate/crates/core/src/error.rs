use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series is identically zero to its precision")]
    ZeroSeries,
    #[error("insufficient q-series precision: need at least N = {required}, have {available}")]
    InsufficientPrecision { required: i64, available: i64 },
    #[error("precision exhausted: best estimate {best_estimate} with relative error {relative_error:e}")]
    PrecisionExhausted {
        best_estimate: String,
        relative_error: f64,
    },
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension {dim} exceeds the exact enumeration limit {limit}; use heuristic mode")]
    DimensionOverLimit { dim: usize, limit: usize },
    #[error("enumeration budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("formula mismatch: {0}")]
    FormulaMismatch(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
