use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SncError {
    #[error("element set is singular: {0}")]
    Singular(String),
    #[error("orbit is not elliptic (specific energy {energy:e} J/kg)")]
    NotElliptic { energy: f64 },
    #[error("Kepler solve did not converge after {iterations} iterations (residual {residual:e})")]
    KeplerNonConvergence { iterations: usize, residual: f64 },
    #[error("degenerate state: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("finite-difference evaluation failed: {0}")]
    FiniteDifference(String),
    #[error("i/o error at {path}: {message}")]
    Io { path: String, message: String },
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SncError>;

impl SncError {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        SncError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
