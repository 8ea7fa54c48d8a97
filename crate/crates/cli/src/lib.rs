//! Command implementations behind the `whitehead` binary.
//!
//! Every command computes its complete output before anything is written, so a
//! command that fails leaves stdout empty.

pub mod commands;
pub mod json;
pub mod sweep;
pub mod verify;

use std::fmt;

use num_integer::Integer;
use whitehead_core::reps::RepTolerances;
use whitehead_core::roots::RootTolerances;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Validation(String),
    Verification(String),
    Scope(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Scope(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Scope(m) => write!(f, "outside the supported range: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// What a successful command prints, and its exit code (0, or 2 when a report
/// contains failures).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    pub roots: RootTolerances,
    pub reps: RepTolerances,
}

/// Largest `|p|` and `q` accepted on the command line.
pub const MAX_PARAMETER: i64 = 100_000;

/// Checks `q > 0`, `gcd(p, q) = 1` and the size limit.
pub fn validate_filling(p: i64, q: i64) -> Result<u32, CliError> {
    if q <= 0 {
        return Err(CliError::Validation(format!("q must be positive, got {q}")));
    }
    if p.abs() > MAX_PARAMETER || q > MAX_PARAMETER {
        return Err(CliError::Validation(format!("|p| and q must not exceed {MAX_PARAMETER}")));
    }
    if p.gcd(&q) != 1 {
        return Err(CliError::Validation(format!("{p} and {q} are not coprime")));
    }
    Ok(q as u32)
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
