//! Built-in presets for the five reference figures.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use scattering::{
    a1_recurrence, a2_closed, a2_recurrence, estimate_frequency, make_grid, make_input, synthesize_second,
    InputKind, OscillatorParams,
};

use crate::commands::{rms_summary, simulate, simulation_columns, RmsDoc};
use crate::config::{Method, RunConfig};
use crate::error::CliResult;
use crate::io;
use crate::plot;

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Figure number
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub figure: u8,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

const SINE: InputKind = InputKind::Sine { amplitude: 1.0, omega: 0.5 };
const STEP: InputKind = InputKind::Step { amplitude: 1.0 };

fn preset(figure: u8, out: PathBuf) -> CliResult<RunConfig> {
    let (b, input, corrected) = match figure {
        1 | 4 => (0.3, SINE, false),
        2 | 5 => (5.0, STEP, false),
        _ => (0.3, STEP, true),
    };
    let config = RunConfig {
        params: OscillatorParams::new(b, 2.0, 1.0)?,
        grid: make_grid(20.0, 20.0)?,
        input,
        method: Method::Closed,
        order: 2,
        corrected_frequency: corrected,
        coeffs_from: None,
        out,
    };
    config.validate()?;
    Ok(config)
}

#[derive(Serialize)]
#[serde(untagged)]
enum Metric {
    Response {
        relative_rms: RmsDoc,
    },
    Frequency {
        relative_rms: RmsDoc,
        exact: f64,
        first_order: f64,
        first_order_corrected: f64,
        window_start: f64,
    },
    Recurrence {
        /// Max table deviation relative to the closed-form max.
        coefficient_deviation: f64,
        /// Relative RMS of the recurrence y2 against the closed-form y2.
        response_rms: f64,
    },
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> CliResult<()> {
    let fig = args.figure;
    let config = preset(fig, args.out.clone())?;
    io::ensure_dir(&config.out)?;
    let stem = format!("fig{fig}");
    let csv_path = config.out.join(format!("{stem}.csv"));
    let svg_path = config.out.join(format!("{stem}.svg"));

    let metric = if fig <= 3 {
        let sim = simulate(&config)?;
        let (times, cols) = simulation_columns(&sim);
        let mut all = vec![("t", times.as_slice())];
        all.extend(cols.iter().copied());
        io::write_columns(&csv_path, &all)?;
        let shown: Vec<(&str, &[f64])> = cols.into_iter().filter(|(name, _)| fig != 3 || *name != "y2").collect();
        let title = match fig {
            1 => "Underdamped oscillator, sine input",
            2 => "Overdamped oscillator, step input",
            _ => "Underdamped oscillator, step input",
        };
        plot::line_chart(&svg_path, title, &times, &shown)?;
        let relative_rms = rms_summary(&sim);
        println!(
            "relative rms vs integrated solution: first order {:.4}, second order {:.4}",
            relative_rms.first_order, relative_rms.second_order
        );
        if fig == 3 {
            let window_start = 10.0;
            let exact = estimate_frequency(&sim.oracle, window_start)?;
            let first_order = estimate_frequency(&sim.y1, window_start)?;
            let corrected = sim.y1_corrected.as_ref().expect("figure 3 preset is corrected");
            let first_order_corrected = estimate_frequency(corrected, window_start)?;
            println!(
                "oscillation frequency on [{window_start}, end]: exact {exact:.4}, first order {first_order:.4}, corrected first order {first_order_corrected:.4}"
            );
            Metric::Frequency {
                relative_rms,
                exact,
                first_order,
                first_order_corrected,
                window_start,
            }
        } else {
            Metric::Response { relative_rms }
        }
    } else {
        let (p, grid) = (&config.params, &config.grid);
        let closed = a2_closed(p, grid);
        let rec = a2_recurrence(p, grid, &a1_recurrence(p, grid))?;
        let x = make_input(config.input, grid);
        let y_closed = synthesize_second(&closed, &x)?;
        let y_rec = synthesize_second(&rec, &x)?;
        let times = x.times();
        io::write_columns(
            &csv_path,
            &[("t", &times), ("y2_closed", y_closed.samples()), ("y2_recurrence", y_rec.samples())],
        )?;
        let title = if fig == 4 {
            "Second-order term, underdamped oscillator, sine input"
        } else {
            "Second-order term, overdamped oscillator, step input"
        };
        plot::line_chart(
            &svg_path,
            title,
            &times,
            &[("closed form", y_closed.samples()), ("recurrence", y_rec.samples())],
        )?;
        let coefficient_deviation = rec.max_abs_diff(&closed) / closed.max_abs();
        let response_rms = scattering::relative_rms(&y_rec, &y_closed);
        println!(
            "recurrence vs closed form: max coefficient deviation {coefficient_deviation:.4e} (relative), y2 relative rms {response_rms:.4e}"
        );
        Metric::Recurrence {
            coefficient_deviation,
            response_rms,
        }
    };
    io::write_sidecar(
        &config.out.join(format!("{stem}.json")),
        &format!("reproduce {fig}"),
        &config,
        &[csv_path, svg_path],
        metric,
    )?;
    Ok(())
}
