//! Command-line front door: run configurations, reproducibility
//! manifests, and plot-ready machine-readable outputs.
//!
//! File formats are documented in `FORMATS.md` at the repository root.
//! Every simulation output is regenerable bit-for-bit from its manifest
//! (the manifest embeds the fully resolved configuration, so it doubles
//! as a config source).

mod commands;
mod config;
mod manifest;
mod table;

pub use commands::{
    cmd_fit, cmd_simulate, cmd_sweep, cmd_zipf, FitForms, FitKind, FitRequest, FitReport,
    SimulateOutcome, SweepReport,
};
pub use config::{load_config_source, parse_config_str, ConfigError, RunConfig};
pub use manifest::{iso8601_utc, RunManifest};
pub use table::{
    read_samples, write_samples, write_series, write_sweep_points, write_zipf_table,
};

use std::fmt;

/// Process exit contract: 0 success, 1 usage/config error, 2
/// runtime/numerical failure.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::engine::EngineError> for CliError {
    fn from(e: crate::engine::EngineError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<crate::stats::StatsError> for CliError {
    fn from(e: crate::stats::StatsError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn io_usage(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn io_runtime(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}
