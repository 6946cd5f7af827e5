//! Error taxonomy shared by the library and the CLI.

use thiserror::Error;

/// Errors raised by the library.
///
/// `ConjectureMismatch` is deliberately *not* used for verification findings:
/// a failed conjecture check is reported as data (see [`crate::report`]) so a
/// caller can distinguish "the computation broke" from "the computation ran
/// and the prediction was wrong".
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
