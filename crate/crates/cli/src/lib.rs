//! Command-line front end for `hwidth`: argument grammar, dispatch and
//! canonical JSON/CSV reports.
//!
//! Exit codes: 0 success, 2 argument error, 3 inconclusive truncation,
//! 4 unwritable output, 1 anything else. `HW_THREADS` caps the worker pool
//! (0 or unset = automatic).

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub use commands::run;
pub use config::RunConfig;
pub use report::{emit_report, render, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hwidth::Error),
    #[error("cannot write {path}: {source}")]
    Unwritable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use hwidth::Error as E;
        match self {
            CliError::Core(E::InvalidArgument(_) | E::Unsupported(_) | E::UnsupportedOracle(_)) => 2,
            CliError::Core(E::InconclusiveTruncation(_)) => 3,
            CliError::Unwritable { .. } => 4,
            _ => 1,
        }
    }
}

fn configure_threads() {
    let n = std::env::var("HW_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        // Fails only if a pool already exists, which is then kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (program name first), runs the command and writes the report.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let outcome = run(&config).and_then(|r| emit_report(&r, config.format, config.output.as_deref()));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hw: {e}");
            e.exit_code()
        }
    }
}
