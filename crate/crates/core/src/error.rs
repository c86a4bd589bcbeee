use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A file-format violation, located by line (1-based; 0 for whole-file rules).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub rule: String,
}

impl ParseError {
    pub fn new(line: usize, rule: impl Into<String>) -> Self {
        Self {
            line,
            rule: rule.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "file: {}", self.rule)
        } else {
            write!(f, "line {}: {}", self.line, self.rule)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("unknown component id {0}")]
    UnknownComponent(usize),
    #[error("curve is not of compact type (dual graph is not a tree)")]
    NotCompactType,
    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),
    #[error("invalid sheaf descriptor: {0}")]
    InvalidSheaf(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A mathematical hypothesis of the requested construction does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

impl Error {
    /// Exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Hypothesis(_) => 1,
            _ => 2,
        }
    }
}
