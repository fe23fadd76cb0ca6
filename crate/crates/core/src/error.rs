use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spin count {requested} outside the allowed range 1..={cap} (raise the cap with --max-spins)")]
    Size { requested: usize, cap: usize },

    #[error("{what} index {index} out of range (valid: {valid})")]
    Index {
        what: &'static str,
        index: usize,
        valid: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("degenerate state: both corner populations are below {0:e}")]
    DegenerateState(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("conflicting coupling for pair ({j}, {k}): {first} vs {second}")]
    Conflict {
        j: usize,
        k: usize,
        first: f64,
        second: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::DegenerateState(_) => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}
