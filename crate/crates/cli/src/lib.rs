//! Request handling and report serialization behind the `qgame` binary.
//!
//! Every command returns a [`CommandOutput`]: the rendered report plus the
//! process exit status. The binary only parses flags and writes the body.

pub mod commands;
pub mod format;
pub mod report;

use std::path::PathBuf;

use qgame_core::statevector::DEFAULT_DENSE_CAP;
use qgame_core::Error;

pub use commands::run;

/// Environment variable that overrides the dense-engine amplitude cap.
pub const DENSE_CAP_ENV: &str = "QGAME_DENSE_CAP";

/// Above this many outcomes the listing is left out unless `--full` is given.
pub const OUTCOME_LISTING_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitStatus {
    Success = 0,
    VerificationFailure = 1,
    Discrepancy = 2,
    Capacity = 3,
    Usage = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => ExitStatus::Usage,
            Error::Capacity { .. } => ExitStatus::Capacity,
            Error::Consistency(_) => ExitStatus::VerificationFailure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    Sweep,
    Classical,
    Verify,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum EngineChoice {
    #[default]
    Dense,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// One fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    /// Players and roads; for `verify` and `compare` the upper bound of the range.
    pub n: usize,
    pub p: i64,
    pub engine: EngineChoice,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub full: bool,
    pub raw: bool,
    pub dense_cap: u128,
}

impl RunRequest {
    pub fn new(command: Command, n: usize) -> Self {
        RunRequest {
            command,
            n,
            p: 1,
            engine: EngineChoice::default(),
            trials: 1_000_000,
            seed: 0,
            format: Format::default(),
            output_path: None,
            full: false,
            raw: false,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

/// Reads [`DENSE_CAP_ENV`], falling back to the library default.
pub fn dense_cap_from_env() -> Result<u128, String> {
    match std::env::var(DENSE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map_err(|e| format!("{DENSE_CAP_ENV}={v:?} is not a non-negative integer: {e}")),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub body: String,
    /// Diagnostics meant for standard error.
    pub message: Option<String>,
    pub status: ExitStatus,
}

impl CommandOutput {
    pub fn ok(body: String) -> Self {
        CommandOutput {
            body,
            message: None,
            status: ExitStatus::Success,
        }
    }

    pub fn error(status: ExitStatus, message: impl Into<String>) -> Self {
        CommandOutput {
            body: String::new(),
            message: Some(message.into()),
            status,
        }
    }
}
