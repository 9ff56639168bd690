use std::io;
use std::path::PathBuf;

use mertens_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config {}: line {line}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("output: {0}")]
    Io(#[from] io::Error),

    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    /// 1 for failed checks and runtime faults, 2 for bad invocations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::Domain(_)
                | CoreError::LimitExceeded { .. }
                | CoreError::Unsupported(_)
                | CoreError::PrecisionTooLow { .. } => 2,
                _ => 1,
            },
            CliError::Io(_) | CliError::VerificationFailed { .. } => 1,
        }
    }
}
