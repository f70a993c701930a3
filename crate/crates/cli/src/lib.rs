//! Batch front end for `bianchi-core`: argument validation, JSON and CSV
//! emission and the coset-list cache.

use std::fmt;

pub mod cache;
pub mod commands;
pub mod config;

pub use commands::{run, Output};
pub use config::RunConfig;

/// Exit status when `--strict` escalates a tolerance warning.
pub const EXIT_WARNING: i32 = 4;

/// Failures, each with its exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad arguments; exit 2.
    Validation(String),
    /// A Poincaré truncation certificate failed; exit 3.
    Certificate(String),
    /// File system trouble; exit 1.
    Io(String),
}

impl CliError {
    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Certificate(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid arguments: {m}"),
            CliError::Certificate(m) => write!(f, "certificate failure: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bianchi_core::Error> for CliError {
    fn from(e: bianchi_core::Error) -> Self {
        match e {
            bianchi_core::Error::Certificate(m) => CliError::Certificate(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}
