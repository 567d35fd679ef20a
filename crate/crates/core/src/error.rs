use thiserror::Error;

/// Errors raised by the laboratory routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} exceeds table limit {limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("missing dependency data: {0}")]
    Dependency(String),

    #[error("undefined result: {0}")]
    Undefined(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn range(what: &'static str, value: u64, limit: u64) -> Self {
        Error::OutOfRange { what, value, limit }
    }

    /// True for errors caused by asking beyond the size of a precomputed table.
    pub fn is_out_of_range(&self) -> bool {
        matches!(self, Error::OutOfRange { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
