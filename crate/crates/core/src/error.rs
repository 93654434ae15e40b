use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed PLY input; `offset` is the byte offset where parsing failed.
    #[error("{}: byte {offset}: {message}", path.display())]
    Ply {
        path: PathBuf,
        offset: u64,
        message: String,
    },

    /// Malformed manifest; `line` is 1-based.
    #[error("{}: line {line}: {message}", path.display())]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {field}: {message}")]
    Config { field: String, message: String },

    #[error("pose count {requested} exceeds the configured cap of {cap}")]
    Capacity { requested: u128, cap: usize },

    #[error("image {}: {message}", path.display())]
    Image { path: PathBuf, message: String },

    #[error("prediction for {0:?} has no ground-truth record")]
    Unmatched(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
