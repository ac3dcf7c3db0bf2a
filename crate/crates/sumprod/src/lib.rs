//! Std companion to `sumprod-core`: parallel sweeps, report formats, plots
//! and the pieces of the command-line front end that are worth testing
//! without spawning a process.

pub mod json;
pub mod literal;
pub mod plot;
pub mod run;
pub mod summary;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed {field}: {reason}")]
    Malformed { field: String, reason: String },
    #[error(transparent)]
    Core(#[from] sumprod_core::Error),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

impl CliError {
    pub fn malformed(field: &str, reason: impl Into<String>) -> Self {
        CliError::Malformed { field: field.to_string(), reason: reason.into() }
    }

    pub fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), reason: err.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
