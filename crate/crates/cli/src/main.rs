//! Command-line front end for the scattering crate.

mod commands;
mod config;
mod error;
mod io;
mod plot;
mod reproduce;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{LevelFilter, Log, Metadata, Record};

use commands::{IdentifyArgs, SimulateArgs};
use config::CommonArgs;
use error::CliResult;
use reproduce::ReproduceArgs;

#[derive(Debug, Parser)]
#[command(name = "scattering", version, about = "Scattering coefficients for the damped anharmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute first- and second-order coefficient tables
    Coeffs(CommonArgs),
    /// Synthesize the response and compare with direct integration
    Simulate(SimulateArgs),
    /// Fit first-order coefficients to frequency-response samples
    Identify(IdentifyArgs),
    /// Regenerate the data and plot for one of the reference figures
    Reproduce(ReproduceArgs),
}

/// Fixed stderr logger; verbosity is not configurable from the environment.
struct StderrLogger;

impl Log for StderrLogger {
    fn enabled(&self, metadata: &Metadata) -> bool {
        metadata.level() <= LevelFilter::Info
    }

    fn log(&self, record: &Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level().as_str().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Coeffs(args) => commands::cmd_coeffs(&args),
        Command::Simulate(args) => commands::cmd_simulate(&args),
        Command::Identify(args) => commands::cmd_identify(&args),
        Command::Reproduce(args) => reproduce::cmd_reproduce(&args),
    }
}

fn main() -> ExitCode {
    if log::set_logger(&LOGGER).is_ok() {
        log::set_max_level(LevelFilter::Info);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; bad usage is a
            // validation failure.
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
