use std::fmt;

use thiserror::Error;

/// Where in an input text a parse failure was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line number.
    Line(usize),
    /// 0-based byte offset.
    Byte(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Byte(b) => write!(f, "byte {b}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input violates an operation's precondition. `witness` names the
    /// offending object when there is one (e.g. a non-sparse subgraph).
    #[error("precondition violated: {message}{}", witness.as_ref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    Precondition {
        message: String,
        witness: Option<String>,
    },

    /// The computation would exceed a configured budget.
    #[error("resource guard: {0}")]
    ResourceGuard(String),
}

impl Error {
    pub fn parse(location: Location, message: impl Into<String>) -> Self {
        Error::Parse {
            location,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition {
            message: message.into(),
            witness: None,
        }
    }

    pub fn precondition_with(message: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Precondition {
            message: message.into(),
            witness: Some(witness.into()),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
