use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] mapl_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: not a prime cache ({reason})", path.display())]
    BadCache { path: PathBuf, reason: &'static str },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// 2 for anything the caller could fix by changing the invocation, 3 for
    /// resource and IO failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(mapl_core::Error::Resource(_)) => 3,
            Error::Core(_) | Error::Usage(_) => 2,
            _ => 3,
        }
    }
}
