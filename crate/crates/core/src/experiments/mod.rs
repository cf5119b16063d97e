//! Batch experiments behind the command-line interface.
//!
//! Each command reads a [`Config`], writes CSV/PGM/text artifacts into an
//! output directory and returns an [`Outcome`]. Every CSV starts with a
//! comment line carrying the SHA-256 of the resolved configuration.

mod commands;
mod config;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_assumptions, cmd_demo_oscillation, cmd_env, cmd_prob, cmd_solve, cmd_verify};
pub use config::{Config, Resolver, KNOWN_KEYS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error at {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

macro_rules! config_error_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Config(e.to_string())
            }
        }
    )*};
}

config_error_from!(crate::environment::EnvError, crate::closed_forms::ClosedFormError, crate::solver::SolverError);

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// False iff one of the command's declared checks failed.
    pub passed: bool,
    /// Human-readable summary, also written to `summary.txt`.
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Exit status for a finished or failed command: 0 success, 1 check
/// failure, 2 configuration error, 3 I/O error.
pub fn exit_code(result: &Result<Outcome, CliError>) -> i32 {
    match result {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}
