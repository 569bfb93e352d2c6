//! Domain types shared by every other module: oscillator parameters, the
//! sampling grid, coefficient tables and causal sampled signals.
//!
//! The oscillator family is
//!
//! ```text
//! y'' + b y' + w0^2 y + eps y^2 = x(t) theta(t),    y(0) = y'(0) = 0
//! ```
//!
//! and every time-domain quantity lives on the grid `t_j = j T` with
//! `T = pi / omega_max`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `|w0 - b/2|` for classifying a system as critical.
pub const CRITICAL_CLASSIFY_TOL: f64 = 1e-12;

/// Relative width `|w+ - w-| / w0` below which coefficient evaluation uses the
/// critically damped limit forms instead of the regime formulas.
pub const NEAR_CRITICAL_SWITCH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    b: f64,
    omega0: f64,
    epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Underdamped,
    Critical,
    Overdamped,
}

impl OscillatorParams {
    pub fn new(b: f64, omega0: f64, epsilon: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::domain(format!("damping b must be positive and finite, got {b}")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::domain(format!(
                "natural frequency omega0 must be positive and finite, got {omega0}"
            )));
        }
        if !epsilon.is_finite() {
            return Err(Error::domain(format!("anharmonicity must be finite, got {epsilon}")));
        }
        Ok(Self { b, omega0, epsilon })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same damping and anharmonicity with a different natural frequency.
    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Self::new(self.b, omega0, self.epsilon)
    }

    /// The linear part of the system (`eps = 0`).
    pub fn linearized(&self) -> Self {
        Self { epsilon: 0.0, ..*self }
    }

    pub fn regime(&self) -> Regime {
        classify(self)
    }

    /// `w0^2 - b^2/4`, evaluated as a product to avoid cancellation near
    /// critical damping.
    pub(crate) fn discriminant(&self) -> f64 {
        let half_b = 0.5 * self.b;
        (self.omega0 - half_b) * (self.omega0 + half_b)
    }
}

pub fn classify(params: &OscillatorParams) -> Regime {
    let half_b = 0.5 * params.b;
    let gap = params.omega0 - half_b;
    if gap.abs() <= CRITICAL_CLASSIFY_TOL * params.omega0 {
        Regime::Critical
    } else if gap > 0.0 {
        Regime::Underdamped
    } else {
        Regime::Overdamped
    }
}

/// Roots of `-w^2 + j b w + w0^2`, i.e. the poles of the linear kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poles {
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    /// Damped resonance `sqrt(w0^2 - b^2/4)`; underdamped only.
    pub omega_r: Option<f64>,
    /// `sqrt(b^2/4 - w0^2)`; overdamped only.
    pub lambda: Option<f64>,
    /// `b/2 + lambda`; overdamped only.
    pub lambda_plus: Option<f64>,
    /// `b/2 - lambda`; overdamped only.
    pub lambda_minus: Option<f64>,
}

pub fn poles_of(params: &OscillatorParams) -> Poles {
    let half_b = 0.5 * params.b;
    match classify(params) {
        Regime::Underdamped => {
            let wr = params.discriminant().sqrt();
            Poles {
                omega_plus: Complex64::new(wr, half_b),
                omega_minus: Complex64::new(-wr, half_b),
                omega_r: Some(wr),
                lambda: None,
                lambda_plus: None,
                lambda_minus: None,
            }
        }
        Regime::Overdamped => {
            let lambda = (-params.discriminant()).sqrt();
            let lambda_plus = half_b + lambda;
            // lambda+ lambda- = w0^2; avoids cancellation when w0 << b.
            let lambda_minus = params.omega0 * params.omega0 / lambda_plus;
            Poles {
                omega_plus: Complex64::new(0.0, lambda_plus),
                omega_minus: Complex64::new(0.0, lambda_minus),
                omega_r: None,
                lambda: Some(lambda),
                lambda_plus: Some(lambda_plus),
                lambda_minus: Some(lambda_minus),
            }
        }
        Regime::Critical => Poles {
            omega_plus: Complex64::new(0.0, half_b),
            omega_minus: Complex64::new(0.0, half_b),
            omega_r: None,
            lambda: None,
            lambda_plus: None,
            lambda_minus: None,
        },
    }
}

/// Sampling grid: bandwidth `omega_max`, step `T = pi/omega_max` and the
/// number of delays `N` needed to cover the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    omega_max: f64,
    t_max: f64,
    n_coeffs: usize,
}

impl GridConfig {
    /// Grid covering `[0, t_max]`: `N = ceil(t_max * omega_max / pi)`, so that
    /// `N T >= t_max`.
    pub fn new(omega_max: f64, t_max: f64) -> Result<Self> {
        check_positive("omega_max", omega_max)?;
        check_positive("t_max", t_max)?;
        let exact = t_max * omega_max / PI;
        // Products like 10 * pi / pi land one ulp above an integer.
        let nearest = exact.round();
        let n = if (exact - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            exact.ceil()
        };
        if n > (u32::MAX as f64) {
            return Err(Error::domain(format!("grid needs {n} coefficients")));
        }
        Ok(Self {
            omega_max,
            t_max,
            n_coeffs: n as usize,
        })
    }

    /// Grid with an explicit coefficient count; the horizon becomes `N T`.
    pub fn with_count(omega_max: f64, n_coeffs: usize) -> Result<Self> {
        check_positive("omega_max", omega_max)?;
        if n_coeffs == 0 {
            return Err(Error::domain("coefficient count must be at least 1"));
        }
        Ok(Self {
            omega_max,
            t_max: n_coeffs as f64 * PI / omega_max,
            n_coeffs,
        })
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `N`; coefficient sequences hold `N + 1` entries.
    pub fn n_coeffs(&self) -> usize {
        self.n_coeffs
    }

    /// Number of samples `N + 1` on `t_j = jT, j = 0..=N`.
    pub fn len(&self) -> usize {
        self.n_coeffs + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        PI / self.omega_max
    }

    /// Delay of index `k`: `k T`.
    pub fn delay(&self, k: usize) -> f64 {
        k as f64 * self.step()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.delay(k)).collect()
    }
}

pub fn make_grid(omega_max: f64, t_max: f64) -> Result<GridConfig> {
    GridConfig::new(omega_max, t_max)
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn same_step(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub(crate) fn check_step(expected: f64, found: f64) -> Result<()> {
    if same_step(expected, found) {
        Ok(())
    } else {
        Err(Error::GridMismatch { expected, found })
    }
}

/// First-order scattering coefficients `a_0 ..= a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs1 {
    values: Vec<f64>,
    grid: GridConfig,
}

impl Coeffs1 {
    pub fn new(grid: GridConfig, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "expected {} first-order coefficients, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("coefficient a_{k} is not finite")));
        }
        Ok(Self { values, grid })
    }

    pub fn zeros(grid: GridConfig) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub(crate) fn from_raw(grid: GridConfig, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { values, grid }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Symmetric second-order table `a_kl`, `0 <= k, l <= N`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs2 {
    values: Vec<f64>,
    dim: usize,
    grid: GridConfig,
}

impl Coeffs2 {
    /// Builds the table from its upper triangle (`k <= l`) and mirrors it.
    pub fn from_upper<F>(grid: GridConfig, mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let dim = grid.len();
        let mut values = vec![0.0; dim * dim];
        for k in 0..dim {
            for l in k..dim {
                let v = entry(k, l);
                values[k * dim + l] = v;
                values[l * dim + k] = v;
            }
        }
        Self { values, dim, grid }
    }

    /// Takes a row-major `(N+1) x (N+1)` table; rejects asymmetric input.
    pub fn new(grid: GridConfig, values: Vec<f64>) -> Result<Self> {
        let dim = grid.len();
        if values.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} second-order entries, got {}",
                dim * dim,
                values.len()
            )));
        }
        for k in 0..dim {
            for l in 0..dim {
                let v = values[k * dim + l];
                if !v.is_finite() {
                    return Err(Error::domain(format!("coefficient a_({k},{l}) is not finite")));
                }
                if v != values[l * dim + k] {
                    return Err(Error::domain(format!("table is not symmetric at ({k},{l})")));
                }
            }
        }
        Ok(Self { values, dim, grid })
    }

    pub fn zeros(grid: GridConfig) -> Self {
        let dim = grid.len();
        Self {
            values: vec![0.0; dim * dim],
            dim,
            grid,
        }
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        if k < self.dim && l < self.dim {
            self.values[k * self.dim + l]
        } else {
            0.0
        }
    }

    /// Row `k` of the table.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Coeffs2) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Causal, uniformly sampled real signal; samples before index 0 are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    step: f64,
}

impl Signal {
    pub fn new(step: f64, samples: Vec<f64>) -> Result<Self> {
        check_positive("step", step)?;
        Ok(Self { samples, step })
    }

    pub fn zeros(step: f64, len: usize) -> Result<Self> {
        Self::new(step, vec![0.0; len])
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample at signed index `j`; zero before the origin and past the end.
    pub fn at(&self, j: isize) -> f64 {
        if j < 0 {
            0.0
        } else {
            self.samples.get(j as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.time(j)).collect()
    }

    /// Delays the signal by `d` samples, keeping its length.
    pub fn delayed(&self, d: usize) -> Signal {
        let n = self.samples.len();
        let mut samples = vec![0.0; n];
        if d < n {
            samples[d..].copy_from_slice(&self.samples[..n - d]);
        }
        Signal {
            samples,
            step: self.step,
        }
    }

    pub fn scaled(&self, c: f64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|v| c * v).collect(),
            step: self.step,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Relative RMS difference `||a - r|| / ||r||` over the common length.
pub fn relative_rms(approx: &Signal, reference: &Signal) -> f64 {
    let n = approx.len().min(reference.len());
    let (mut num, mut den) = (0.0, 0.0);
    for (a, r) in approx.samples[..n].iter().zip(&reference.samples[..n]) {
        num += (a - r) * (a - r);
        den += r * r;
    }
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_pi_bandwidth_has_unit_step() {
        let g = make_grid(PI, 10.0).unwrap();
        assert_eq!(g.step(), 1.0);
        assert_eq!(g.n_coeffs(), 10);
    }

    #[test]
    fn grid_figure_settings() {
        let g = make_grid(20.0, 20.0).unwrap();
        assert_relative_eq!(g.step(), 0.157_079_632_679_489_66, max_relative = 1e-15);
        assert_eq!(g.n_coeffs(), 128);
        assert!(g.n_coeffs() as f64 * g.step() >= 20.0);
        assert_relative_eq!(g.delay(3), 3.0 * PI / 20.0);
    }

    #[test]
    fn grid_rejects_bad_arguments() {
        assert!(make_grid(20.0, 0.0).is_err());
        assert!(make_grid(0.0, 1.0).is_err());
        assert!(make_grid(-1.0, 1.0).is_err());
        assert!(make_grid(f64::NAN, 1.0).is_err());
        assert!(make_grid(1.0, f64::INFINITY).is_err());
        assert!(GridConfig::with_count(20.0, 0).is_err());
    }

    #[test]
    fn classify_reference_cases() {
        let p = |b, w0| OscillatorParams::new(b, w0, 1.0).unwrap();
        assert_eq!(classify(&p(0.3, 2.0)), Regime::Underdamped);
        assert_eq!(classify(&p(5.0, 2.0)), Regime::Overdamped);
        assert_eq!(classify(&p(4.0, 2.0)), Regime::Critical);
        assert_eq!(classify(&p(4.0, 2.0 * (1.0 + 1e-13))), Regime::Critical);
        assert_eq!(classify(&p(4.0, 2.0 * (1.0 + 1e-9))), Regime::Underdamped);
    }

    #[test]
    fn params_validation() {
        assert!(OscillatorParams::new(0.0, 1.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -3.0).is_ok());
    }

    #[test]
    fn poles_underdamped() {
        let p = poles_of(&OscillatorParams::new(0.3, 2.0, 1.0).unwrap());
        let wr = 1.994_367_067_517_913;
        assert_relative_eq!(p.omega_r.unwrap(), wr, max_relative = 1e-15);
        assert_relative_eq!(p.omega_plus.re, wr, max_relative = 1e-15);
        assert_relative_eq!(p.omega_minus.re, -wr, max_relative = 1e-15);
        assert_eq!(p.omega_plus.im, 0.15);
        assert!(p.lambda.is_none());
    }

    #[test]
    fn poles_overdamped() {
        let p = poles_of(&OscillatorParams::new(5.0, 2.0, 1.0).unwrap());
        assert_relative_eq!(p.lambda.unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(p.lambda_plus.unwrap(), 4.0, max_relative = 1e-15);
        assert_relative_eq!(p.lambda_minus.unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(p.omega_plus.im, 4.0);
        assert_relative_eq!(p.omega_minus.im, 1.0);
        assert!(p.omega_r.is_none());
    }

    #[test]
    fn poles_critical() {
        let p = poles_of(&OscillatorParams::new(4.0, 2.0, 1.0).unwrap());
        assert_eq!(p.omega_plus, Complex64::new(0.0, 2.0));
        assert_eq!(p.omega_minus, p.omega_plus);
    }

    #[test]
    fn coeffs2_rejects_asymmetric() {
        let g = GridConfig::with_count(PI, 1).unwrap();
        assert!(Coeffs2::new(g, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(Coeffs2::new(g, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn signal_causal_indexing_and_delay() {
        let s = Signal::new(0.5, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.at(-1), 0.0);
        assert_eq!(s.at(2), 3.0);
        assert_eq!(s.delayed(1).samples(), &[0.0, 1.0, 2.0]);
        assert_eq!(s.delayed(5).samples(), &[0.0, 0.0, 0.0]);
    }
}
