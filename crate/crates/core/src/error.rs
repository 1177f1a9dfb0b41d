use thiserror::Error;

/// Errors raised by the numerical core and the harness.
#[derive(Debug, Error)]
pub enum OpaError {
    #[error("exponent p = {0} is outside (1, inf)")]
    InvalidExponent(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("grid size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constant OPA: the degree-1 approximant collapsed to degree 0")]
    ConstantOpa,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsatisfiable corpus spec: {0}")]
    Unsatisfiable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, OpaError>;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(OpaError::InvalidExponent(p))
    }
}
