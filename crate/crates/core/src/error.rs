use thiserror::Error;

/// Errors raised by the glow computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlowError {
    /// An input exceeds the documented work or size cap.
    #[error("size error: {0}")]
    Size(String),
    /// Arguments are incompatible with each other (mismatched sizes, groups, ...).
    #[error("argument error: {0}")]
    Argument(String),
    /// A numeric parameter lies outside its admissible range.
    #[error("range error: {0}")]
    Range(String),
    /// Malformed textual input.
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    /// The input violates a mathematical precondition of the operation.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, GlowError>;

impl GlowError {
    pub(crate) fn size(msg: impl Into<String>) -> Self {
        GlowError::Size(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        GlowError::Argument(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        GlowError::Range(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        GlowError::Parse {
            position,
            message: msg.into(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        GlowError::Precondition(msg.into())
    }
}
