//! Reference solutions by direct time integration.
//!
//! A fixed-step classical Runge-Kutta scheme integrates the full nonlinear
//! equation, its linear part, or the second-order correction equation
//! `y2'' + b y2' + w0^2 y2 = -eps y1^2`. Each grid interval is split into
//! `substeps` internal steps. Integration always starts at `t = 0` with zero
//! state and the drive already switched on.

use crate::error::{Error, Result};
use crate::model::{OscillatorParams, Signal};
use crate::response::InputKind;

/// How the drive is evaluated between grid samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Piecewise-linear interpolation of the sampled input.
    Interpolated,
    /// Exact evaluation of a known input; the sampled signal only fixes the
    /// grid and length.
    Analytic(InputKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    substeps: usize,
    drive: Drive,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            substeps: 20,
            drive: Drive::Interpolated,
        }
    }
}

impl IntegratorConfig {
    pub fn new(substeps: usize, drive: Drive) -> Result<Self> {
        if substeps == 0 {
            return Err(Error::domain("integrator needs at least one substep"));
        }
        Ok(Self { substeps, drive })
    }

    pub fn analytic(kind: InputKind) -> Self {
        Self {
            drive: Drive::Analytic(kind),
            ..Self::default()
        }
    }

    pub fn with_substeps(self, substeps: usize) -> Result<Self> {
        Self::new(substeps, self.drive)
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn drive(&self) -> Drive {
        self.drive
    }
}

const BLOW_UP: f64 = 1e150;

/// Integrates `s' = f(t, s)` from zero state and records `s` at every grid
/// point `jT`, `j < n_samples`.
fn integrate<const D: usize, F>(
    n_samples: usize,
    step: f64,
    substeps: usize,
    mut deriv: F,
) -> Result<Vec<[f64; D]>>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    let mut out = Vec::with_capacity(n_samples);
    let mut state = [0.0; D];
    if n_samples == 0 {
        return Ok(out);
    }
    out.push(state);
    let h = step / substeps as f64;
    let axpy = |s: &[f64; D], k: &[f64; D], c: f64| -> [f64; D] {
        let mut r = *s;
        for i in 0..D {
            r[i] += c * k[i];
        }
        r
    };
    for j in 0..n_samples - 1 {
        let t0 = j as f64 * step;
        for i in 0..substeps {
            let t = t0 + i as f64 * h;
            let k1 = deriv(t, &state);
            let k2 = deriv(t + 0.5 * h, &axpy(&state, &k1, 0.5 * h));
            let k3 = deriv(t + 0.5 * h, &axpy(&state, &k2, 0.5 * h));
            let k4 = deriv(t + h, &axpy(&state, &k3, h));
            for d in 0..D {
                state[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
            if state.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP) {
                return Err(Error::BlowUp { time: t + h });
            }
        }
        out.push(state);
    }
    Ok(out)
}

fn linear_interp(samples: &[f64], step: f64, t: f64) -> f64 {
    if samples.is_empty() || t < 0.0 {
        return 0.0;
    }
    let pos = t / step;
    let i = pos.floor() as usize;
    if i + 1 >= samples.len() {
        return samples[samples.len() - 1];
    }
    let frac = pos - i as f64;
    samples[i] + frac * (samples[i + 1] - samples[i])
}

/// Four-point Lagrange interpolation, stencil shifted inward at the ends.
fn cubic_interp(samples: &[f64], step: f64, t: f64) -> f64 {
    let n = samples.len();
    if n < 4 {
        return linear_interp(samples, step, t);
    }
    let pos = t / step;
    let base = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let x = pos - base as f64;
    let (x0, x1, x2, x3) = (x, x - 1.0, x - 2.0, x - 3.0);
    let y = &samples[base..base + 4];
    -y[0] * x1 * x2 * x3 / 6.0 + y[1] * x0 * x2 * x3 / 2.0 - y[2] * x0 * x1 * x3 / 2.0
        + y[3] * x0 * x1 * x2 / 6.0
}

fn drive_fn<'a>(input: &'a Signal, cfg: &IntegratorConfig) -> impl Fn(f64) -> f64 + 'a {
    let drive = cfg.drive;
    move |t| match drive {
        Drive::Interpolated => linear_interp(input.samples(), input.step(), t),
        Drive::Analytic(kind) => kind.eval(t),
    }
}

/// Full nonlinear response `y'' + b y' + w0^2 y + eps y^2 = x(t)`.
pub fn integrate_exact(params: &OscillatorParams, input: &Signal, cfg: &IntegratorConfig) -> Result<Signal> {
    let (b, w0sq, eps) = (params.b(), params.omega0().powi(2), params.epsilon());
    let x = drive_fn(input, cfg);
    let states = integrate(input.len(), input.step(), cfg.substeps, |t, s: &[f64; 2]| {
        [s[1], x(t) - b * s[1] - w0sq * s[0] - eps * s[0] * s[0]]
    })?;
    Signal::new(input.step(), states.iter().map(|s| s[0]).collect())
}

/// Linear response (`eps` forced to zero).
pub fn integrate_linear(params: &OscillatorParams, input: &Signal, cfg: &IntegratorConfig) -> Result<Signal> {
    integrate_exact(&params.linearized(), input, cfg)
}

/// Second-order correction driven by a sampled first-order response.
pub fn integrate_correction(params: &OscillatorParams, y1: &Signal, cfg: &IntegratorConfig) -> Result<Signal> {
    let (b, w0sq, eps) = (params.b(), params.omega0().powi(2), params.epsilon());
    let states = integrate(y1.len(), y1.step(), cfg.substeps, |t, s: &[f64; 2]| {
        let v = cubic_interp(y1.samples(), y1.step(), t);
        [s[1], -eps * v * v - b * s[1] - w0sq * s[0]]
    })?;
    Signal::new(y1.step(), states.iter().map(|s| s[0]).collect())
}

/// First-order response and its correction integrated as one coupled system,
/// so the correction sees the exact `y1` rather than an interpolant.
pub fn integrate_perturbative(
    params: &OscillatorParams,
    input: &Signal,
    cfg: &IntegratorConfig,
) -> Result<(Signal, Signal)> {
    let (b, w0sq, eps) = (params.b(), params.omega0().powi(2), params.epsilon());
    let x = drive_fn(input, cfg);
    let states = integrate(input.len(), input.step(), cfg.substeps, |t, s: &[f64; 4]| {
        [
            s[1],
            x(t) - b * s[1] - w0sq * s[0],
            s[3],
            -eps * s[0] * s[0] - b * s[3] - w0sq * s[2],
        ]
    })?;
    Ok((
        Signal::new(input.step(), states.iter().map(|s| s[0]).collect())?,
        Signal::new(input.step(), states.iter().map(|s| s[2]).collect())?,
    ))
}

/// Angular frequency from the mean spacing of crossings of the window mean
/// over `[window_start, end]`; crossing times are linearly interpolated.
pub fn estimate_frequency(signal: &Signal, window_start: f64) -> Result<f64> {
    let first = if window_start <= 0.0 {
        0
    } else {
        (window_start / signal.step()).ceil() as usize
    };
    let window = signal.samples().get(first..).unwrap_or(&[]);
    if window.len() < 2 {
        return Err(Error::InsufficientOscillation { crossings: 0 });
    }
    let mean = window.iter().sum::<f64>() / window.len() as f64;
    let mut crossings = Vec::new();
    for (i, pair) in window.windows(2).enumerate() {
        let (d0, d1) = (pair[0] - mean, pair[1] - mean);
        if (d0 >= 0.0) != (d1 >= 0.0) {
            let frac = d0 / (d0 - d1);
            crossings.push(signal.time(first + i) + frac * signal.step());
        }
    }
    if crossings.len() < 4 {
        return Err(Error::InsufficientOscillation {
            crossings: crossings.len(),
        });
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    let half_period = span / (crossings.len() - 1) as f64;
    Ok(std::f64::consts::PI / half_period)
}
