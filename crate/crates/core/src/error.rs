use thiserror::Error;

/// Errors produced by the tanglegram library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A size precondition failed, e.g. a caterpillar with fewer than two leaves.
    #[error("invalid size for {what}: {size} (need at least {min})")]
    InvalidSize {
        what: &'static str,
        size: usize,
        min: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Family indices start at 1.
    #[error("invalid family index {0} (indices start at 1)")]
    InvalidIndex(usize),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    /// An exhaustive search was refused because the input is larger than the cap.
    #[error("budget exceeded: size {size} is above the cap of {cap}")]
    BudgetExceeded { size: usize, cap: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
