//! Command-line driver for `contraction-core`: space generation, contraction
//! spaces, audits and their reports, and a persistent table cache.

pub mod args;
pub mod cache;
pub mod commands;
pub mod report;

use std::path::Path;
use std::process::ExitCode;

use args::{Cli, Command};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] contraction_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub const EXIT_AUDIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Runs one command; the exit code is 0 on success, 1 when an audit failed
/// and 2 on bad input.
pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli) {
        Ok(failed) if failed => ExitCode::from(EXIT_AUDIT_FAILED),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    let run = match &cli.command {
        Command::Gen(a) => {
            println!("{}", commands::cmd_gen(a)?.display());
            return Ok(false);
        }
        Command::Hat(r) | Command::Delta(r) => r,
        Command::Audit(a) => &a.run,
        Command::Dichotomy(a) => &a.run,
        Command::ConeCompare(a) => &a.run,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.workers)
        .build()
        .map_err(|e| CliError::Input(format!("cannot start {} workers: {e}", run.workers)))?;
    let report = pool.install(|| match &cli.command {
        Command::Hat(r) => commands::cmd_hat(r),
        Command::Delta(r) => commands::cmd_delta(r),
        Command::Audit(a) => commands::cmd_audit(a),
        Command::Dichotomy(a) => commands::cmd_dichotomy(a),
        Command::ConeCompare(a) => commands::cmd_cone_compare(a),
        Command::Gen(_) => unreachable!(),
    })?;
    commands::emit(&report, run.out.as_deref())?;
    Ok(report.failed())
}
