use std::path::PathBuf;

use thiserror::Error;

/// Exit code for malformed or unphysical input.
pub const EXIT_INVALID_INPUT: u8 = 2;
/// Exit code for a numerical failure during computation.
pub const EXIT_NUMERICAL: u8 = 3;
/// Exit code for a failed validation run.
pub const EXIT_VALIDATION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] ogd_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        use ogd_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::Csv(_) => EXIT_INVALID_INPUT,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Core(e) => match e {
                E::Singular { .. }
                | E::NonFiniteObjective { .. }
                | E::GridBudgetExceeded { .. } => EXIT_NUMERICAL,
                _ => EXIT_INVALID_INPUT,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
