//! Reference computations shared by the integration tests. Nothing here
//! calls the closed-form or recurrence code paths.
#![allow(dead_code)]

use num_complex::Complex64;
use scattering::{Coeffs2, GridConfig, OscillatorParams, Signal};

pub fn params(b: f64, w0: f64, eps: f64) -> OscillatorParams {
    OscillatorParams::new(b, w0, eps).unwrap()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Impulse response of `y'' + b y' + w0^2 y` from the roots of
/// `s^2 + b s + w0^2`, with the repeated-root limit handled separately.
pub fn impulse(b: f64, w0: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let disc = Complex64::new(b * b - 4.0 * w0 * w0, 0.0).sqrt();
    if disc.norm() < 1e-7 * w0 {
        return t * (-0.5 * b * t).exp();
    }
    let s1 = 0.5 * (-b + disc);
    let s2 = 0.5 * (-b - disc);
    (((s1 * t).exp() - (s2 * t).exp()) / (s1 - s2)).re
}

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss-Legendre rule.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            GL_NODES
                .iter()
                .zip(GL_WEIGHTS)
                .map(|(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// `a_kl = -eps T^2 int_0^min h(u) h(kT - u) h(lT - u) du`.
pub fn a2_quadrature(p: &OscillatorParams, grid: &GridConfig, k: usize, l: usize) -> f64 {
    let (b, w0) = (p.b(), p.omega0());
    let (kt, lt) = (grid.delay(k), grid.delay(l));
    let upper = kt.min(lt);
    if upper == 0.0 {
        return 0.0;
    }
    let panels = (upper * 20.0).ceil().max(8.0) as usize;
    let integral = gauss_legendre(
        |u| impulse(b, w0, u) * impulse(b, w0, kt - u) * impulse(b, w0, lt - u),
        0.0,
        upper,
        panels,
    );
    -p.epsilon() * grid.step() * grid.step() * integral
}

/// Second-order output from the full double sum, no symmetry shortcut.
/// Also returns the sum of term magnitudes for each sample.
pub fn double_sum(c2: &Coeffs2, x: &Signal) -> (Vec<f64>, Vec<f64>) {
    let xs = x.samples();
    let n = c2.dim();
    let mut out = Vec::with_capacity(xs.len());
    let mut mag = Vec::with_capacity(xs.len());
    for j in 0..xs.len() {
        let (mut acc, mut abs) = (0.0, 0.0);
        for k in 0..n.min(j + 1) {
            for l in 0..n.min(j + 1) {
                let term = c2.get(k, l) * xs[j - k] * xs[j - l];
                acc += term;
                abs += term.abs();
            }
        }
        out.push(acc);
        mag.push(abs);
    }
    (out, mag)
}
