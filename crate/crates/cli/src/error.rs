use qwalk_core::QwalkError;
use thiserror::Error;

/// Failure of a subcommand, split by the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameters: exit code 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Anything that went wrong while running: exit code 1.
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<QwalkError> for CliError {
    fn from(e: QwalkError) -> Self {
        match e {
            QwalkError::LatticeExhausted { .. } => CliError::Runtime(e.into()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
