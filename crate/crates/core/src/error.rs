use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports, grouped so a driver can map them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied an invalid parameter or combination of parameters.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("input has no instances")]
    EmptyInput,

    /// Structural problem in an input file (ragged rows, bad tokens).
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    /// A field could not be read as a finite real. Row and column are 1-based.
    #[error("parse error at row {row}, column {column}: {field:?} is not a finite number")]
    Parse { row: usize, column: usize, field: String },

    /// An edge set does not connect all nodes.
    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    /// An edge set is not a spanning tree (cycle, bad index, wrong size).
    #[error("invalid tree structure: {0}")]
    Structure(String),

    /// A deserialized artifact violates one of its invariants.
    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn file(path: &Path, source: io::Error) -> Self {
        Error::File { path: path.to_path_buf(), source }
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
