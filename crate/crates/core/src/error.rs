use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one C status code in
/// the FFI crate and onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NflError {
    /// Sizes that have to agree do not.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },

    /// Input data violates a documented precondition (normalization,
    /// feasibility of a target, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A guarded enumeration or allocation would exceed its configured cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, NflError>;

pub(crate) fn shape_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(NflError::Shape(msg.into()))
}
