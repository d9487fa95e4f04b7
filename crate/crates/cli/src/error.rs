use greenprop_core::error::ErrorKind;
use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const SUITE_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NUMERICAL: u8 = 3;
    pub const CONVERGENCE: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error(transparent)]
    Core(#[from] greenprop_core::Error),

    #[error("validation suite failed: {0}")]
    SuiteFailed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => exit::USAGE,
            CliError::SuiteFailed(_) => exit::SUITE_FAILED,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => exit::USAGE,
                ErrorKind::Numerical => exit::NUMERICAL,
                ErrorKind::Convergence => exit::CONVERGENCE,
                ErrorKind::Check => exit::SUITE_FAILED,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io { path: PathBuf::from("<stdout>"), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
