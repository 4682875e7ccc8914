use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] adc_core::Error),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 0 success, 1 validation failure, 2 usage or configuration error, 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                adc_core::Error::InvalidArgument(_)
                | adc_core::Error::CutoffTooSmall { .. }
                | adc_core::Error::LambdaAboveGuard { .. } => 2,
                _ => 1,
            },
            CliError::ValidationFailed(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
