use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use scattering::{make_grid, GridConfig, InputKind, OscillatorParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exact residue formulas.
    Closed,
    /// Finite-difference recurrences.
    Recurrence,
    /// First-order coefficients from a previous `identify` run.
    Identified,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Damping coefficient
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub b: f64,
    /// Natural frequency of the linear part
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub omega0: f64,
    /// Strength of the quadratic nonlinearity
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Band limit; the time step is pi / omega_max
    #[arg(long, default_value_t = 20.0)]
    pub omega_max: f64,
    /// Time horizon covered by the coefficients
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Input signal, step:K or sine:A:w
    #[arg(long, default_value = "sine:1:0.5")]
    pub input: InputKind,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Highest order of coefficients to compute or use
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
    /// Use the amplitude-corrected frequency for first order (step input only)
    #[arg(long)]
    pub corrected_frequency: bool,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Validated description of one run; serialized into every sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: OscillatorParams,
    pub grid: GridConfig,
    pub input: InputKind,
    pub method: Method,
    pub order: u8,
    pub corrected_frequency: bool,
    pub coeffs_from: Option<PathBuf>,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs, coeffs_from: Option<PathBuf>) -> CliResult<Self> {
        let config = RunConfig {
            params: OscillatorParams::new(args.b, args.omega0, args.epsilon)?,
            grid: make_grid(args.omega_max, args.t_max)?,
            input: args.input,
            method: args.method,
            order: args.order,
            corrected_frequency: args.corrected_frequency,
            coeffs_from,
            out: args.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.method == Method::Identified {
            if self.order == 2 {
                return Err(CliError::Validation(
                    "identified coefficients are first order only; pass --order 1".into(),
                ));
            }
            if self.coeffs_from.is_none() {
                return Err(CliError::Validation(
                    "method identified needs --coeffs-from pointing at an identify output directory".into(),
                ));
            }
        }
        if self.corrected_frequency && self.step_amplitude().is_none() {
            return Err(CliError::Validation(
                "--corrected-frequency applies to step inputs only".into(),
            ));
        }
        Ok(())
    }

    pub fn step_amplitude(&self) -> Option<f64> {
        match self.input {
            InputKind::Step { amplitude } => Some(amplitude),
            InputKind::Sine { .. } => None,
        }
    }
}
