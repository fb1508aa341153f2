//! Error type shared by the problem representation and the engines built on it.

use thiserror::Error;

/// Failure of a parsing, analysis or engine operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The problem text does not follow the grammar.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A configuration has the wrong number of slots.
    #[error("arity mismatch at line {line}: expected {expected} slots, found {found}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },
    /// A label was referenced that is not part of the problem.
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    /// A configured resource cap was hit; `partial` describes progress made so far.
    #[error("resource cap exceeded: {what} (cap {cap}); partial: {partial}")]
    Cap {
        what: String,
        cap: u64,
        partial: String,
    },
    /// The caller-supplied deadline passed before the operation finished.
    #[error("deadline exceeded; partial: {partial}")]
    Deadline { partial: String },
    /// The requested variant of an operation is deliberately not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A precondition of the operation does not hold.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for cap and deadline failures, which callers may retry with larger limits.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Cap { .. } | Error::Deadline { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

/// Result alias used throughout the workspace engines.
pub type Result<T, E = Error> = std::result::Result<T, E>;
