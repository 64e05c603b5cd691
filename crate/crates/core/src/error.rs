//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, HallError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error("letter X{index} is outside the alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },

    #[error("unknown tree id {0}")]
    InvalidTreeId(u32),

    #[error("lambda/mu are undefined on the letter {0}")]
    LeafHasNoFactors(String),

    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{tree} lies outside the domain of the {order} order")]
    Domain { order: String, tree: String },

    #[error("length {length} exceeds the configured maximum length {max_len}")]
    Capacity { length: usize, max_len: usize },

    #[error("{0} is not a member of the Hall set")]
    NotMember(String),

    #[error("expected {left} < {right} under the Hall order")]
    NotOrdered { left: String, right: String },

    #[error("{0} is not a Lyndon word")]
    NotLyndon(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("operands belong to different Hall sets or alphabets")]
    Mismatch,
}

impl HallError {
    /// Process exit code associated with the error (2 for usage/config, 3 for capacity).
    pub fn exit_code(&self) -> i32 {
        match self {
            HallError::Capacity { .. } => 3,
            _ => 2,
        }
    }
}
