use ptcubic_core::asymptotics::AsymptoticsError;
use ptcubic_core::pade::PadeError;
use ptcubic_core::perturbation::PerturbationError;
use ptcubic_core::spectral::SpectralError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::InvalidConfig(_) => "invalid-config",
            CliError::Io(_) | CliError::Json(_) => "output",
            _ => "computation",
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            CliError::InvalidConfig(_) | CliError::Io(_) | CliError::Json(_) => "cli",
            CliError::Perturbation(_) => "perturbation",
            CliError::Pade(_) => "pade",
            CliError::Spectral(_) => "spectral",
            CliError::Asymptotics(_) => "asymptotics",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) => 2,
            _ => 1,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            schema: crate::schema("error"),
            error: ErrorBody {
                kind: self.kind(),
                module: self.module(),
                message: self.to_string(),
            },
        }
    }
}

/// Machine-readable error written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub schema: String,
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub module: &'static str,
    pub message: String,
}
