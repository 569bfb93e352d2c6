//! Scattering coefficients from finite-difference recurrences on the
//! governing equation.
//!
//! First order (forward differences):
//!
//! ```text
//! a_0 = 0,  a_1 = T^2,
//! a_{k+2} = (2 - bT) a_{k+1} - (1 + w0^2 T^2 - bT) a_k
//! ```
//!
//! Second order (backward differences along the diagonal `k - l = const`):
//!
//! ```text
//! a_kl = [(2 + bT) a_{k-1,l-1} - a_{k-2,l-2} - eps T^2 a_k a_l] / (1 + bT + w0^2 T^2)
//! ```
//!
//! Both schemes are first-order accurate in `T`. The first-order scheme is
//! explicit: its characteristic roots are `z = 1 + jT w+-`, which leave the
//! unit circle once `w0^2 T^2 > bT` (lightly damped systems on coarse grids).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{check_step, poles_of, Coeffs1, Coeffs2, GridConfig, OscillatorParams};

/// Roots `1 + jT w+` and `1 + jT w-` of `z^2 + (bT - 2) z + 1 + w0^2 T^2 - bT`.
pub fn characteristic_roots(params: &OscillatorParams, grid: &GridConfig) -> (Complex64, Complex64) {
    let poles = poles_of(params);
    let jt = Complex64::new(0.0, grid.step());
    (1.0 + jt * poles.omega_plus, 1.0 + jt * poles.omega_minus)
}

/// Largest characteristic-root modulus of the first-order scheme; the
/// recurrence grows without bound when this exceeds 1.
pub fn spectral_radius(params: &OscillatorParams, grid: &GridConfig) -> f64 {
    let (zp, zm) = characteristic_roots(params, grid);
    zp.norm().max(zm.norm())
}

pub fn a1_recurrence(params: &OscillatorParams, grid: &GridConfig) -> Coeffs1 {
    let radius = spectral_radius(params, grid);
    if radius > 1.0 {
        log::warn!(
            "first-order recurrence is unstable on this grid (root modulus {radius:.6} > 1, \
             step {:.6}); refine omega_max",
            grid.step()
        );
    }

    let t = grid.step();
    let bt = params.b() * t;
    let w0t = params.omega0() * t;
    let c1 = 2.0 - bt;
    let c0 = 1.0 + w0t * w0t - bt;

    let mut values = vec![0.0; grid.len()];
    if values.len() > 1 {
        values[1] = t * t;
    }
    for k in 0..values.len().saturating_sub(2) {
        values[k + 2] = c1 * values[k + 1] - c0 * values[k];
    }
    Coeffs1::from_raw(*grid, values)
}

/// Second-order table driven by `a1` (normally from [`a1_recurrence`]).
///
/// The table is filled one diagonal `l - k = d` at a time; each entry only
/// reads the two preceding entries on its own diagonal.
pub fn a2_recurrence(params: &OscillatorParams, grid: &GridConfig, a1: &Coeffs1) -> Result<Coeffs2> {
    check_step(grid.step(), a1.grid().step())?;
    if a1.len() != grid.len() {
        return Err(Error::domain(format!(
            "first-order coefficients have {} entries, grid needs {}",
            a1.len(),
            grid.len()
        )));
    }

    let t = grid.step();
    let bt = params.b() * t;
    let w0t = params.omega0() * t;
    let lag1 = 2.0 + bt;
    let denom = 1.0 + bt + w0t * w0t;
    let source = params.epsilon() * t * t;
    let a = a1.values();
    let dim = grid.len();

    let mut upper = vec![0.0; dim * dim];
    for d in 0..dim {
        let (mut prev2, mut prev1) = (0.0, 0.0);
        for k in 0..dim - d {
            let l = k + d;
            let v = (lag1 * prev1 - prev2 - source * a[k] * a[l]) / denom;
            upper[k * dim + l] = v;
            prev2 = prev1;
            prev1 = v;
        }
    }
    Ok(Coeffs2::from_upper(*grid, |k, l| upper[k * dim + l]))
}
