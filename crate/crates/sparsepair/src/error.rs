use std::path::PathBuf;

/// Errors of the std layer: the core errors plus IO and parsing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] sparsepair_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for bad input, 3 for IO, 4 when a combinatorial
    /// guard refused the work.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(sparsepair_core::Error::GuardExceeded { .. }) => 4,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
