use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value lies outside the admissible parameter region.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// A truncated comparison ran out of kneading symbols before it could be decided.
    #[error("undecidable at depth {needed}: kneading sequence K{sequence} only has {available} symbols")]
    Undecidable {
        sequence: usize,
        needed: usize,
        available: usize,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Constraint(_) | Error::Parse(_) => 2,
            Error::Undecidable { .. } | Error::Numeric(_) | Error::Resource(_) => 3,
            Error::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
