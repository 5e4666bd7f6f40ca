use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
///
/// Numerical blow-up is deliberately absent: the integrator reports it as a
/// [`crate::integrator::HaltReason`], not as an error.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("sequencing error: {0}")]
    Sequencing(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl LabError {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
