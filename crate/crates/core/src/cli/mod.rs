//! Command-line front end. Each command writes its data file plus a
//! [`RunManifest`]; exit codes are 0 success, 2 usage, 3 I/O and 4 protocol
//! precondition violation.

mod args;
mod commands;
mod output;
mod sweep;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;

pub use args::{
    AnalyzeArgs, AttackArgs, AttackKind, Cli, Command, IntList, KeygenArgs, PrecisionRange,
    RoundtripArgs, SweepArgs, SweepKind,
};
pub use output::{manifest_path_for, RunManifest, SCHEMA_VERSION};
pub use sweep::MAX_GRID_CELLS;

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Protocol(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Protocol(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::InvalidArgument(_)
            | Error::PrecisionOutOfRange(_)
            | Error::PrecisionMismatch { .. }
            | Error::EnumerationCap(_) => CliError::Usage(text),
            Error::Serialization(_) => CliError::Io(text),
            _ => CliError::Protocol(text),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("json: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(format!("csv: {e}"))
    }
}

/// Master seed: the flag, else `QPKE_SEED`, else fresh entropy.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(crate::rng::seed_from_env)
        .unwrap_or_else(rand::random)
}

/// Runs an already parsed command; returns the text for stdout.
pub fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Keygen(a) => commands::keygen(&a),
        Command::Roundtrip(a) => commands::roundtrip(&a),
        Command::Attack(a) => commands::attack(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Sweep(a) => sweep::sweep(&a),
    }
}

/// Parses `args` (including the program name), runs the command, prints
/// results, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
