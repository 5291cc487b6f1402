use std::io;
use std::path::PathBuf;

use hbv_core::model::ParamError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: io::Error },
    #[error("{path} is not valid JSON for this input: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("every wave speed failed")]
    AllWavesFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Param(_) | CliError::Input { .. } | CliError::Parse { .. } => 2,
            CliError::AllWavesFailed => 3,
            CliError::Solver(_) => 4,
            CliError::Output { .. } => 1,
        }
    }
}
