use thiserror::Error;

/// Errors raised anywhere in the surrogate pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material properties: {0}")]
    InvalidProps(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("return mapping did not converge after {iterations} iterations (residual {residual:e})")]
    ReturnMapping { iterations: usize, residual: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("covariance factorization failed after jitter escalation up to {jitter:e}")]
    Factorization { jitter: f64 },

    #[error("teacher calibration failed: {0}")]
    Calibration(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("non-finite gradient at step {step} of path {path}")]
    NanGradient { path: usize, step: usize },

    #[error("training diverged at epoch {epoch}")]
    Diverged {
        epoch: usize,
        last_good: Box<crate::training::Checkpoint>,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ReturnMapping { .. }
                | Error::Factorization { .. }
                | Error::NanGradient { .. }
                | Error::Diverged { .. }
                | Error::Calibration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
