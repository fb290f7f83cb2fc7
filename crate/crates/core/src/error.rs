//! Shared error type for the core crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A tensor or network operation received incompatible shapes.
    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: &'static str,
        expected: String,
        actual: String,
    },

    /// A NaN or infinity showed up where finite math was required.
    #[error("non-finite value in {context}: {detail}")]
    NonFinite {
        context: &'static str,
        detail: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed record in a dataset or table file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structurally valid file whose contents violate the dataset contract.
    #[error("schema violation: {0}")]
    Schema(String),

    /// An estimator has no defined value on the given input.
    #[error("undefined estimate: {0}")]
    UndefinedEstimate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
