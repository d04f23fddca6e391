use thiserror::Error;

use crate::scheme::SchemeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: String,
        cap: String,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not a coherent configuration: {0}")]
    NotAScheme(SchemeViolation),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal consistency check failed. This always indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what,
            value: value.to_string(),
            cap: cap.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
