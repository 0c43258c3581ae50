use std::io;
use std::path::Path;

use thiserror::Error;

/// Failure classes, each with a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// An inequality failed on real ±1 lists. This cannot happen for correct
    /// arithmetic, so it always indicates a defect.
    #[error("identity violated: {0}")]
    IdentityViolated(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::IdentityViolated(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn format(path: &Path, msg: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: malformed file: {msg}", path.display()))
    }
}

impl From<bellmatch::Error> for CliError {
    fn from(err: bellmatch::Error) -> Self {
        CliError::Invalid(err.to_string())
    }
}
