mod args;
mod commands;
mod error;
mod experiment;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use experiment::Experiment;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Direct(a) => commands::direct(&Experiment::resolve(&a)?),
        Command::Invert(a) => commands::invert(&Experiment::resolve(&a)?),
        Command::Tables(a) => commands::tables(&Experiment::resolve(&a)?),
        Command::Lcurve(a) => commands::lcurve_cmd(&Experiment::resolve(&a)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on bad usage, which matches our validation code.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
