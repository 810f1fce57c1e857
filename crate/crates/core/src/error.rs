use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A line of an edge-list file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A well-formed line describes a self-loop or a repeated edge.
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },

    /// Bad argument to an oracle or generator (missing edge, out-of-range vertex, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Estimator or generator configuration outside its admissible range.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Stream protocol misuse, such as starting a pass while one is active.
    #[error("usage error: {0}")]
    Usage(String),

    /// Violation of an internal scheduling contract.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Parse { .. } | Error::Validation { .. } | Error::Json(_) => 3,
            _ => 1,
        }
    }
}
