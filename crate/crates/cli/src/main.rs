//! `modtd`: run the rotating-bandit and card-sorting comparisons and write
//! per-step, time-to-preference and sweep tables as CSV alongside a JSON
//! manifest.

mod args;
mod config_file;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use modtd::experiments::{run_experiment, sweep_choices, ExperimentConfig};

use crate::args::{Cli, Command};

/// Exit code for rejected input, matching clap's usage errors.
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 1;

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<modtd::Error> for Failure {
    fn from(e: modtd::Error) -> Self {
        match e {
            modtd::Error::InvalidArgument { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Bandit(args) => {
            let (config, out) = args.resolve().map_err(Failure::Usage)?;
            single(&config, &out)
        }
        Command::Cardsort(args) => {
            let (config, out) = args.resolve().map_err(Failure::Usage)?;
            single(&config, &out)
        }
        Command::Sweep(args) => {
            let (config, ns, out) = args.resolve().map_err(Failure::Usage)?;
            sweep(&config, &ns, &out)
        }
        Command::Run(args) => {
            let file = config_file::load(&args.config).map_err(|e| Failure::Usage(format!("{e:#}")))?;
            match &file.sweep {
                Some(ns) => sweep(&file.experiment, ns, &file.output.dir),
                None => single(&file.experiment, &file.output.dir),
            }
        }
    }
}

fn single(config: &ExperimentConfig, out: &Path) -> Result<(), Failure> {
    config.validate()?;
    let result = run_experiment(config)?;
    let written = output::write_experiment(&result, out)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn sweep(config: &ExperimentConfig, ns: &[usize], out: &Path) -> Result<(), Failure> {
    config.validate()?;
    let rows = sweep_choices(config, ns)?;
    let written = output::write_sweep(config, ns, &rows, out)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
