use std::process::ExitCode;

use ncps_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {}", .0.join(", "))]
    Failed(Vec<String>),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::SingularRegime { .. } => 3,
                Error::NotConverged { .. } => 4,
                Error::InvalidParameter(_) | Error::InvalidCutoff { .. } | Error::LabelOutOfRange { .. } => 2,
                _ => 1,
            },
            CliError::Failed(_) | CliError::Io(_) | CliError::Encode(_) => 1,
        };
        ExitCode::from(code)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}
