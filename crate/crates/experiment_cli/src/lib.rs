//! Command-line orchestration: flat configuration files, deterministic
//! batch runs, and CSV / JSON-lines export for every experiment.

mod cli;
mod config;
mod experiment;
mod output;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("run error: {0}")]
    Run(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: `2` for invalid input, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Run(_) | CliError::Io(_) => 1,
        }
    }
}

pub use cli::{run_cli, Cli, Command};
pub use config::{Config, SECTIONS};
pub use experiment::{Experiment, ExperimentResult, Summary, TrialLine};
pub use output::{config_hash, header_line, summary_csv, trials_jsonl, SUMMARY_COLUMNS};
