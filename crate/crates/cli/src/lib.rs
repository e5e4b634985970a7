//! Command-line harness over `interplay-core`: tensor I/O, configuration,
//! and deterministic CSV/JSON reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;
pub mod tnsr;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

pub use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    /// An audit found a violated invariant (only with `--strict`).
    #[error("violation: {0}")]
    Violation(String),
    /// Unreadable, unwritable or malformed file.
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    BadArgs(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Io(_) => 2,
            CliError::BadArgs(_) => 3,
        }
    }
}

impl From<interplay_core::Error> for CliError {
    fn from(e: interplay_core::Error) -> Self {
        use interplay_core::Error as E;
        match e {
            E::NonFinite { .. } | E::ShapeMismatch { .. } => CliError::Io(e.to_string()),
            _ => CliError::BadArgs(e.to_string()),
        }
    }
}

impl From<tnsr::TnsrError> for CliError {
    fn from(e: tnsr::TnsrError) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Parses `argv`, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.jobs > 0 {
        // only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
