//! Scenario-file loading and artifact output for the `ramanmem` CLI.
//!
//! The binary in `main.rs` is a thin dispatcher; everything testable lives
//! here: strict TOML parsing into core scenario types, bit-stable CSV
//! export, and SVG line plots derived from the same numbers as the CSV.

pub mod csv_out;
pub mod scenario_file;
pub mod svg_out;

use std::fmt;

use ramanmem::SimError;

/// CLI-level failure, carrying the process exit code.
///
/// Exit codes: 0 success, 1 usage, 2 validation (bad files, bad values,
/// unusable paths), 3 numerical failure during simulation or analysis.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// A numerical failure is anything that can only surface while propagating
/// or analyzing; everything else is a validation problem with the inputs.
fn is_numerical(err: &SimError) -> bool {
    match err {
        SimError::ExpmFailure { .. }
        | SimError::EmptyStepPolicy { .. }
        | SimError::NoStoredCoherence { .. } => true,
        SimError::GroupFailure { source, .. } | SimError::ChannelFailure { source, .. } => {
            is_numerical(source)
        }
        _ => false,
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        if is_numerical(&err) {
            CliError::Numerical(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}
