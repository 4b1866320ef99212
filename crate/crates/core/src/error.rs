use std::fmt;

use thiserror::Error;

/// A syntax or validation error in algebra-spec source, with a 1-based
/// source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("family #{family} (`{source_line}`): {reason}")]
    Family {
        family: usize,
        source_line: String,
        reason: String,
    },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors raised by an explicit size guard rather than by bad input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::ResourceGuard(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
