use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use scattering::{
    a1_closed, a1_recurrence, a2_closed, a2_recurrence, build_design, corrected_frequency, integrate_exact,
    make_grid, make_input, predict_response, reconstruct_h1, relative_rms, solve_coeffs, synthesize_first,
    synthesize_second, Coeffs1, Coeffs2, CorrectedFrequency, GridConfig, InputKind, IntegratorConfig, Signal,
};

use crate::config::{CommonArgs, Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io;

/// Coefficients chosen by the run configuration.
pub struct CoeffSet {
    pub a1: Coeffs1,
    pub a2: Option<Coeffs2>,
    pub corrected: Option<CorrectedFrequency>,
}

/// `a1` honours `--corrected-frequency`; `a2` always uses the plain
/// parameters.
pub fn compute_coeffs(config: &RunConfig) -> CliResult<CoeffSet> {
    let (params, grid) = (&config.params, &config.grid);
    let corrected = match config.step_amplitude() {
        Some(k) if config.corrected_frequency => Some(corrected_frequency(params, k)?),
        _ => None,
    };
    let a1_params = match corrected {
        Some(c) => params.with_omega0(c.omega0_corrected)?,
        None => *params,
    };
    let (a1, a2) = match config.method {
        Method::Closed => (a1_closed(&a1_params, grid), (config.order == 2).then(|| a2_closed(params, grid))),
        Method::Recurrence => {
            let a2 = if config.order == 2 {
                Some(a2_recurrence(params, grid, &a1_recurrence(params, grid))?)
            } else {
                None
            };
            (a1_recurrence(&a1_params, grid), a2)
        }
        Method::Identified => {
            return Err(CliError::Validation(
                "identified coefficients come from the identify command".into(),
            ))
        }
    };
    Ok(CoeffSet { a1, a2, corrected })
}

#[derive(Serialize)]
struct Deviation {
    a1: f64,
    a2: Option<f64>,
}

#[derive(Serialize)]
struct CoeffsReport {
    n_coeffs: usize,
    step: f64,
    a1_max_abs: f64,
    a2_max_abs: Option<f64>,
    corrected_frequency: Option<CorrectedFrequencyDoc>,
    /// Max deviation from the closed form relative to the closed-form max.
    deviation_from_closed: Option<Deviation>,
}

#[derive(Serialize)]
struct CorrectedFrequencyDoc {
    omega0_corrected: f64,
    omega_r_corrected: Option<f64>,
    input_amplitude: f64,
}

fn corrected_doc(c: &Option<CorrectedFrequency>) -> Option<CorrectedFrequencyDoc> {
    c.map(|c| CorrectedFrequencyDoc {
        omega0_corrected: c.omega0_corrected,
        omega_r_corrected: c.omega_r_corrected,
        input_amplitude: c.input_amplitude,
    })
}

pub fn cmd_coeffs(args: &CommonArgs) -> CliResult<()> {
    let config = RunConfig::from_args(args, None)?;
    let set = compute_coeffs(&config)?;
    io::ensure_dir(&config.out)?;

    let mut files = vec![config.out.join(io::A1_FILE)];
    io::write_a1(&files[0], &set.a1)?;
    if let Some(a2) = &set.a2 {
        files.push(config.out.join(io::A2_FILE));
        io::write_a2(&files[1], a2)?;
    }

    let deviation = if config.method == Method::Recurrence {
        let closed = RunConfig {
            method: Method::Closed,
            ..config.clone()
        };
        let reference = compute_coeffs(&closed)?;
        let a1 = io_max_diff(set.a1.values(), reference.a1.values()) / reference.a1.max_abs();
        let a2 = match (&set.a2, &reference.a2) {
            (Some(r), Some(c)) => Some(r.max_abs_diff(c) / c.max_abs()),
            _ => None,
        };
        println!("max deviation from closed form (relative to max): a1 {a1:.6e}");
        if let Some(d) = a2 {
            println!("max deviation from closed form (relative to max): a2 {d:.6e}");
        }
        Some(Deviation { a1, a2 })
    } else {
        None
    };

    let report = CoeffsReport {
        n_coeffs: config.grid.n_coeffs(),
        step: config.grid.step(),
        a1_max_abs: set.a1.max_abs(),
        a2_max_abs: set.a2.as_ref().map(Coeffs2::max_abs),
        corrected_frequency: corrected_doc(&set.corrected),
        deviation_from_closed: deviation,
    };
    io::write_sidecar(&config.out.join("coeffs.json"), "coeffs", &config, &files, report)?;
    println!("wrote {} coefficient files to {}", files.len(), config.out.display());
    Ok(())
}

fn io_max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Read a1.csv (and a2.csv) from this directory instead of computing them
    #[arg(long)]
    pub coeffs_from: Option<PathBuf>,
}

/// Synthesized responses plus the integrated reference.
pub struct Simulation {
    pub grid: GridConfig,
    pub input: Signal,
    pub y1: Signal,
    pub y2: Signal,
    pub total: Signal,
    pub oracle: Signal,
    pub y1_corrected: Option<Signal>,
}

fn load_coeffs(dir: &Path, config: &RunConfig) -> CliResult<CoeffSet> {
    let a1 = io::read_a1(&dir.join(io::A1_FILE), config.grid.omega_max())?;
    let a2 = if config.order == 2 {
        Some(io::read_a2(&dir.join(io::A2_FILE), a1.grid())?)
    } else {
        None
    };
    Ok(CoeffSet { a1, a2, corrected: None })
}

pub fn simulate(config: &RunConfig) -> CliResult<Simulation> {
    let set = match &config.coeffs_from {
        Some(dir) => load_coeffs(dir, config)?,
        None => compute_coeffs(&RunConfig {
            corrected_frequency: false,
            ..config.clone()
        })?,
    };
    let grid = *set.a1.grid();
    let input = make_input(config.input, &grid);
    let y1 = synthesize_first(&set.a1, &input)?;
    let y2 = match &set.a2 {
        Some(a2) => synthesize_second(a2, &input)?,
        None => Signal::zeros(grid.step(), input.len())?,
    };
    let total = Signal::new(
        grid.step(),
        y1.samples().iter().zip(y2.samples()).map(|(a, b)| a + b).collect(),
    )?;
    let oracle = integrate_exact(&config.params, &input, &IntegratorConfig::analytic(config.input))?;
    let y1_corrected = if config.corrected_frequency {
        let corrected = compute_coeffs(&RunConfig {
            method: Method::Closed,
            order: 1,
            grid,
            ..config.clone()
        })?;
        Some(synthesize_first(&corrected.a1, &input)?)
    } else {
        None
    };
    Ok(Simulation {
        grid,
        input,
        y1,
        y2,
        total,
        oracle,
        y1_corrected,
    })
}

#[derive(Serialize)]
struct SimulateReport {
    samples: usize,
    step: f64,
    /// Relative RMS difference from the integrated nonlinear equation.
    relative_rms: RmsDoc,
}

#[derive(Serialize)]
pub struct RmsDoc {
    pub first_order: f64,
    pub second_order: f64,
    pub y1_corrected: Option<f64>,
}

pub fn rms_summary(sim: &Simulation) -> RmsDoc {
    RmsDoc {
        first_order: relative_rms(&sim.y1, &sim.oracle),
        second_order: relative_rms(&sim.total, &sim.oracle),
        y1_corrected: sim.y1_corrected.as_ref().map(|y| relative_rms(y, &sim.oracle)),
    }
}

pub fn simulation_columns(sim: &Simulation) -> (Vec<f64>, Vec<(&'static str, &[f64])>) {
    let times = sim.y1.times();
    let mut cols: Vec<(&str, &[f64])> = vec![
        ("y1", sim.y1.samples()),
        ("y2", sim.y2.samples()),
        ("total", sim.total.samples()),
        ("oracle", sim.oracle.samples()),
    ];
    if let Some(c) = &sim.y1_corrected {
        cols.push(("y1_corrected", c.samples()));
    }
    (times, cols)
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let config = RunConfig::from_args(&args.common, args.coeffs_from.clone())?;
    let sim = simulate(&config)?;
    io::ensure_dir(&config.out)?;
    let csv_path = config.out.join("simulate.csv");
    let (times, cols) = simulation_columns(&sim);
    let mut all = vec![("t", times.as_slice())];
    all.extend(cols);
    io::write_columns(&csv_path, &all)?;

    let rms = rms_summary(&sim);
    println!("relative rms vs integrated solution: first order {:.6e}", rms.first_order);
    println!("relative rms vs integrated solution: second order {:.6e}", rms.second_order);
    if let Some(v) = rms.y1_corrected {
        println!("relative rms vs integrated solution: corrected first order {v:.6e}");
    }
    let report = SimulateReport {
        samples: sim.input.len(),
        step: sim.grid.step(),
        relative_rms: rms,
    };
    io::write_sidecar(&config.out.join("simulate.json"), "simulate", &config, &[csv_path], report)?;
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IdentifyArgs {
    /// CSV with columns omega and reh and/or imh
    #[arg(long)]
    pub measurements: PathBuf,
    #[arg(long, default_value_t = 20.0)]
    pub omega_max: f64,
    /// Horizon used to size N when --n is not given
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Highest coefficient index to identify
    #[arg(long)]
    pub n: Option<usize>,
    /// Predict the response to this input (step:K or sine:A:w)
    #[arg(long)]
    pub input: Option<InputKind>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct IdentifyReport {
    rows: usize,
    unknowns: usize,
    condition: f64,
    residual: f64,
    a0_indeterminate: bool,
    /// Max |reconstructed - measured| over the supplied parts, relative to the
    /// largest measured magnitude.
    reconstruction_max_error: f64,
}

pub fn cmd_identify(args: &IdentifyArgs) -> CliResult<()> {
    let samples = io::read_measurements(&args.measurements)?;
    let grid = match args.n {
        Some(n) => GridConfig::with_count(args.omega_max, n)?,
        None => make_grid(args.omega_max, args.t_max)?,
    };
    let design = build_design(&samples, &grid)?;
    let id = solve_coeffs(&design, &samples)?;
    if id.a0_indeterminate {
        log::warn!("only imaginary parts supplied: a_0 is indeterminate and reported as 0");
    }

    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for (i, &w) in samples.omegas().iter().enumerate() {
        let r = reconstruct_h1(&id.coeffs, w)?;
        if let Some(re) = samples.re_h() {
            worst = worst.max((r.re - re[i]).abs());
            scale = scale.max(re[i].abs());
        }
        if let Some(im) = samples.im_h() {
            worst = worst.max((r.im - im[i]).abs());
            scale = scale.max(im[i].abs());
        }
    }

    io::ensure_dir(&args.out)?;
    let mut files = vec![args.out.join(io::A1_FILE)];
    io::write_a1(&files[0], &id.coeffs)?;
    if let Some(kind) = args.input {
        let x = make_input(kind, &grid);
        let y = predict_response(&id.coeffs, &x)?;
        let path = args.out.join("prediction.csv");
        io::write_columns(&path, &[("t", &x.times()), ("x", x.samples()), ("y", y.samples())])?;
        files.push(path);
    }
    let report = IdentifyReport {
        rows: design.rows(),
        unknowns: design.unknowns(),
        condition: id.condition,
        residual: id.residual,
        a0_indeterminate: id.a0_indeterminate,
        reconstruction_max_error: if scale > 0.0 { worst / scale } else { worst },
    };
    println!(
        "identified {} coefficients from {} rows (condition {:.3e}, residual {:.3e}{})",
        report.unknowns,
        report.rows,
        report.condition,
        report.residual,
        if id.a0_indeterminate { ", a0 indeterminate" } else { "" }
    );
    io::write_sidecar(&args.out.join("identify.json"), "identify", args, &files, report)?;
    Ok(())
}
