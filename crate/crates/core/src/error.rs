use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid mode layout: {0}")]
    InvalidLayout(String),

    #[error("Hilbert-space dimension {dim} exceeds the configured limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("steady state looks degenerate: {0}")]
    DegenerateSteadyState(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("density matrix has eigenvalue {min_eigenvalue:e}; the Fock truncation is too small")]
    Truncation { min_eigenvalue: f64 },

    #[error("resonant denominator: |pole + rate| = {magnitude:e} (pole {pole}, rate {rate})")]
    ResonantDenominator { pole: C64, rate: C64, magnitude: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
