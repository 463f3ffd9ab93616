//! CLI error type, partitioned by exit code: usage = 1, validation = 2,
//! numerical invariant failure = 3.

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical invariant failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<vibron::Error> for CliError {
    fn from(e: vibron::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
