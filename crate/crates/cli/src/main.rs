mod args;
mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use config::ConfigFile;

/// Exit codes: 0 success, 1 validation error, 2 numerical failure.
#[derive(Debug)]
pub struct CliError {
    message: String,
    numerical: bool,
}

impl CliError {
    fn validation(message: String) -> Self {
        CliError {
            message,
            numerical: false,
        }
    }
}

impl From<signdrift::Error> for CliError {
    fn from(e: signdrift::Error) -> Self {
        CliError {
            numerical: e.is_numerical(),
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match ConfigFile::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => run::simulate(a, &cfg),
        Command::EvolveDensity(a) => run::evolve_density(a, &cfg),
        Command::Stationary(a) => run::stationary(a, &cfg),
        Command::Compare(a) => run::compare(a, &cfg),
        Command::GeneratorCheck(a) => run::generator_check(a, &cfg),
        Command::FourierCheck(a) => run::fourier_check(a, &cfg),
        Command::VarianceSweep(a) => run::variance_sweep_cmd(a, &cfg),
        Command::SmoothSweep(a) => run::smooth_sweep(a, &cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(if e.numerical { 2 } else { 1 })
        }
    }
}
