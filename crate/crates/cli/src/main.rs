use std::process::ExitCode;

use clap::Parser;
use contraction_cli::args::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with 2 on usage errors, matching input errors
    contraction_cli::run(Cli::parse())
}
