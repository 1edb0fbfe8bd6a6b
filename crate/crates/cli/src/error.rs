use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {flag}: {reason}")]
    Config { flag: &'static str, reason: String },
    #[error("{0}")]
    Run(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(flag: &'static str, reason: impl Into<String>) -> Self {
        CliError::Config { flag, reason: reason.into() }
    }

    pub fn run(e: impl std::fmt::Display) -> Self {
        CliError::Run(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config { .. } => ExitCode::from(2),
            _ => ExitCode::from(3),
        }
    }
}
