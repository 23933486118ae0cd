//! Command implementations behind the `chsh-tradeoff` binary, plus the
//! output formats they write. Every artifact embeds the [`RunConfig`] that
//! produced it together with [`FORMAT_VERSION`].
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input or
//! arguments, 3 invariant violation (e.g. a non-normalized state),
//! 10 a state exceeding the four-qubit anchored bound was found.

mod commands;
mod format;
mod grid;
mod sweep;
pub mod verify;

pub use commands::{
    artifact_config, cmd_analyze, cmd_random, cmd_replay, cmd_search, cmd_sweep, cmd_verify, render, report_error, run,
    search_report, Rendered,
};
pub use format::{fmt_sig12, write_atomic};
pub use grid::{parse_angle, GridAxis, GridSpec};
pub use sweep::{sweep_rows, SweepFamily, SweepOutcome, SweepRow};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "chsh-tradeoff/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_VIOLATION: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Sweep,
    Search,
    Verify,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Everything needed to reproduce a run. Worker count is deliberately not
/// part of it: results do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_qubit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input_path: None,
            output_path: None,
            format: OutputFormat::Json,
            seed: None,
            family: None,
            grid: None,
            phi: None,
            free_qubit: None,
            qubits: None,
            samples: None,
            restarts: None,
            count: None,
            anchor: None,
            warm_start: None,
            suite: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => EXIT_PARSE,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl From<crate::qcore::io::StateFileError> for CliError {
    fn from(e: crate::qcore::io::StateFileError) -> Self {
        use crate::qcore::io::StateFileError;
        match e {
            StateFileError::Normalization(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Numerical(_) | crate::Error::DegenerateInput(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}
