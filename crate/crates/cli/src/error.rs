use thiserror::Error;

use crate::config::Origin;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{origin}: {message}")]
    Config { origin: Origin, message: String },

    #[error("missing required key '{0}'")]
    Missing(String),

    #[error(transparent)]
    Core(#[from] pstmsc_core::Error),

    /// The command ran but at least one requested result is unavailable.
    #[error("{0}")]
    Incomplete(String),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn config(origin: &Origin, message: impl Into<String>) -> Self {
        CliError::Config { origin: origin.clone(), message: message.into() }
    }

    /// 0 success, 1 usage or configuration problem, 2 domain outcome.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Missing(_) | CliError::Output { .. } => 1,
            CliError::Core(e) if e.is_domain_error() => 2,
            CliError::Core(_) => 1,
            CliError::Incomplete(_) => 2,
        }
    }
}
