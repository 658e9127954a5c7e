mod args;
mod commands;
mod config;
mod error;
mod output;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Status;
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("RECDEF_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!("RECDEF_THREADS={value} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("RECDEF_THREADS: {e}")))
}

fn run(cli: &Cli) -> Result<Status, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Polys(a) => commands::polys(a),
        Command::Density(a) => commands::density(a),
        Command::Deform(a) => commands::deform(a),
        Command::Validate(a) => commands::validate(a),
        Command::Compare(a) => commands::compare(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("recdef: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
