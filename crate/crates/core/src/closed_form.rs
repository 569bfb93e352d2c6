//! Exact scattering coefficients of the anharmonic oscillator obtained by
//! residue evaluation of the Fourier-coefficient integrals of `H1` and `H2`.
//!
//! First order, with `k~ = kT` and `T = pi/omega_max`:
//!
//! ```text
//! general      a_k = T j (e^{j k~ w-} - e^{j k~ w+}) / (w+ - w-)
//! underdamped  a_k = T e^{-k~ b/2} sin(k~ wR) / wR
//! overdamped   a_k = T e^{-k~ b/2} sinh(k~ lambda) / lambda
//! critical     a_k = T k~ e^{-k~ b/2}
//! ```
//!
//! Second order uses `m~ = min(k, l) T` and `n~ = max(k, l) T`. The regime
//! formulas are evaluated with their exponentials merged (`e^{-s b/2} e^{m b/2}`
//! becomes `e^{-(s - m) b/2}` and so on) so that long horizons cannot
//! overflow; the algebra is otherwise unchanged.
//!
//! The `*_general_*` functions evaluate the complex pole forms directly and
//! exist as an independent check on the regime-specialized production path.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    poles_of, Coeffs1, Coeffs2, GridConfig, OscillatorParams, NEAR_CRITICAL_SWITCH,
};

/// Relative gap `|2 lambda- - lambda+| / b` below which the removable
/// singularity of the overdamped second-order formula is evaluated by series.
pub const DEGENERATE_SERIES_SWITCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    Under { wr: f64 },
    Over { lambda: f64, lp: f64, lm: f64 },
    Critical,
}

fn branch(params: &OscillatorParams) -> Branch {
    let disc = params.discriminant();
    let width = 2.0 * disc.abs().sqrt();
    if width < NEAR_CRITICAL_SWITCH * params.omega0() {
        Branch::Critical
    } else if disc > 0.0 {
        Branch::Under { wr: disc.sqrt() }
    } else {
        let lambda = (-disc).sqrt();
        let lp = 0.5 * params.b() + lambda;
        Branch::Over {
            lambda,
            lp,
            lm: params.omega0() * params.omega0() / lp,
        }
    }
}

/// Regime-dispatched `a_k`.
pub fn a1_closed_at(params: &OscillatorParams, grid: &GridConfig, k: usize) -> f64 {
    let step = grid.step();
    let kt = grid.delay(k);
    let half_b = 0.5 * params.b();
    match branch(params) {
        Branch::Under { wr } => step * (-kt * half_b).exp() * (kt * wr).sin() / wr,
        Branch::Over { lambda, lp, lm } => {
            if kt * lambda < 20.0 {
                step * (-kt * half_b).exp() * (kt * lambda).sinh() / lambda
            } else {
                step * ((-lm * kt).exp() - (-lp * kt).exp()) / (2.0 * lambda)
            }
        }
        Branch::Critical => step * kt * (-kt * half_b).exp(),
    }
}

/// `a_0 ..= a_N` from the regime formulas.
pub fn a1_closed(params: &OscillatorParams, grid: &GridConfig) -> Coeffs1 {
    let values = (0..grid.len()).map(|k| a1_closed_at(params, grid, k)).collect();
    Coeffs1::from_raw(*grid, values)
}

/// Complex pole form of `a_k`. At exact pole coincidence the limit
/// `T k~ e^{j k~ w+}` is returned.
pub fn a1_general_at(params: &OscillatorParams, grid: &GridConfig, k: usize) -> Complex64 {
    let poles = poles_of(params);
    let (wp, wm) = (poles.omega_plus, poles.omega_minus);
    let kt = grid.delay(k);
    let j = Complex64::i();
    if wp == wm {
        return grid.step() * kt * (j * kt * wp).exp();
    }
    grid.step() * j * ((j * kt * wm).exp() - (j * kt * wp).exp()) / (wp - wm)
}

pub fn a1_general(params: &OscillatorParams, grid: &GridConfig) -> Vec<Complex64> {
    (0..grid.len()).map(|k| a1_general_at(params, grid, k)).collect()
}

/// Regime-dispatched `a_kl`.
pub fn a2_closed_at(params: &OscillatorParams, grid: &GridConfig, k: usize, l: usize) -> f64 {
    let (k, l) = if k <= l { (k, l) } else { (l, k) };
    let eps = params.epsilon();
    let step = grid.step();
    let kt = grid.delay(k);
    let lt = grid.delay(l);
    // k <= l, so m~ = k~ and n~ = l~
    let (m, n) = (kt, lt);
    let s = kt + lt;
    let b = params.b();
    let half_b = 0.5 * b;
    let w0sq = params.omega0() * params.omega0();

    match branch(params) {
        Branch::Under { wr } => {
            let pre = -step * step * eps / (2.0 * w0sq * wr * wr);
            let den = 9.0 * w0sq - 2.0 * b * b;
            let e_s = (-s * half_b).exp();
            let e_sm = (-(s - m) * half_b).exp();
            let phase = s - 3.0 * m;
            let cos_part = (3.0 * w0sq - b * b)
                * (e_s * (s * wr).cos() - e_sm * (phase * wr).cos())
                / den;
            let sin_part =
                2.0 * b * wr * (e_s * (s * wr).sin() - e_sm * (phase * wr).sin()) / den;
            let tail = e_s * ((kt - lt) * wr).cos() - (-n * half_b).exp() * (wr * n).cos();
            pre * (cos_part + sin_part + tail)
        }
        Branch::Critical => {
            let pre = -4.0 * step * step * eps / (b * b * b * b);
            let first = (-b * s * 0.5).exp() * (b * b * kt * lt + 4.0 * b * s + 24.0);
            let second = (-b * n * 0.5).exp()
                * (b * b * kt * lt - 4.0 * b * s - b * b * m * m + 12.0 * b * m - 24.0);
            pre * (first + second)
        }
        Branch::Over { lambda, lp, lm } => {
            let pre = -step * step * eps / (4.0 * lambda * lambda);
            let d1 = 2.0 * lp - lm;
            let term1 = ((-lp * s).exp() - (-lp * s + d1 * m).exp()) / (lp * d1);
            let d2 = 2.0 * lm - lp;
            let term2 = if d2.abs() < DEGENERATE_SERIES_SWITCH * b {
                (-lm * s).exp() * one_minus_exp_over(d2, m) / lm
            } else {
                ((-lm * s).exp() - (-lm * s + d2 * m).exp()) / (lm * d2)
            };
            let term3 = -((-lm * kt - lp * lt).exp() + (-lp * kt - lm * lt).exp()
                - (-lp * n).exp()
                - (-lm * n).exp())
                / (lp * lm);
            pre * (term1 + term2 + term3)
        }
    }
}

/// `(1 - e^{d m}) / d` by its Taylor series, truncated after the `m^4` term.
fn one_minus_exp_over(d: f64, m: f64) -> f64 {
    -m - d * m * m / 2.0 - d * d * m * m * m / 6.0 - d * d * d * m * m * m * m / 24.0
}

/// Full symmetric `(N+1) x (N+1)` table from the regime formulas.
pub fn a2_closed(params: &OscillatorParams, grid: &GridConfig) -> Coeffs2 {
    Coeffs2::from_upper(*grid, |k, l| a2_closed_at(params, grid, k, l))
}

/// Complex pole form of `a_kl`. Not defined when the poles coincide.
pub fn a2_general_at(params: &OscillatorParams, grid: &GridConfig, k: usize, l: usize) -> Complex64 {
    let poles = poles_of(params);
    let (wp, wm) = (poles.omega_plus, poles.omega_minus);
    let j = Complex64::i();
    let step = grid.step();
    let kt = grid.delay(k);
    let lt = grid.delay(l);
    let m = kt.min(lt);
    let n = kt.max(lt);
    let s = kt + lt;

    let pre = -step * step * params.epsilon() / ((wp - wm) * (wp - wm));
    let d1 = 2.0 * wp - wm;
    let t1 = ((j * wp * s).exp() - (j * wp * s - j * d1 * m).exp()) / (wp * d1);
    let d2 = 2.0 * wm - wp;
    let t2 = if (d2 * m).norm() < 1e-3 {
        // (1 - e^{u}) / d2 with u = -j d2 m
        let u = -j * d2 * m;
        (j * wm * s).exp() * j * m * (1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0) / wm
    } else {
        ((j * wm * s).exp() - (j * wm * s - j * d2 * m).exp()) / (wm * d2)
    };
    let t3 = -((j * wm * kt + j * wp * lt).exp() + (j * wp * kt + j * wm * lt).exp()
        - (j * wp * n).exp()
        - (j * wm * n).exp())
        / (wp * wm);
    pre * (t1 + t2 + t3)
}

/// Amplitude-corrected oscillation frequency for a step input of height `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedFrequency {
    /// `Omega0`, the corrected undamped frequency.
    pub omega0_corrected: f64,
    /// `sqrt(Omega0^2 - b^2/4)`; absent when the corrected system is not
    /// underdamped.
    pub omega_r_corrected: Option<f64>,
    pub input_amplitude: f64,
}

/// Solves `Omega0^2 - w0^2 = 2 eps K / Omega0^2` for the positive root,
/// `Omega0^2 = (w0^2 + sqrt(w0^4 + 8 eps K)) / 2`.
pub fn corrected_frequency(params: &OscillatorParams, k_amplitude: f64) -> Result<CorrectedFrequency> {
    if !k_amplitude.is_finite() {
        return Err(Error::domain(format!("step amplitude must be finite, got {k_amplitude}")));
    }
    let w0 = params.omega0();
    let w0sq = w0 * w0;
    let shift = 8.0 * params.epsilon() * k_amplitude;
    let disc = w0sq * w0sq + shift;
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "omega0^4 + 8 eps K = {disc} < 0: no real corrected frequency"
        )));
    }
    let omega0_corrected = if shift == 0.0 {
        w0
    } else {
        (0.5 * (w0sq + disc.sqrt())).sqrt()
    };
    let half_b = 0.5 * params.b();
    let gap = (omega0_corrected - half_b) * (omega0_corrected + half_b);
    Ok(CorrectedFrequency {
        omega0_corrected,
        omega_r_corrected: (gap > 0.0).then(|| gap.sqrt()),
        input_amplitude: k_amplitude,
    })
}

/// First-order coefficients with `w0` replaced by the corrected `Omega0`.
pub fn a1_resonance_corrected(
    params: &OscillatorParams,
    grid: &GridConfig,
    k_amplitude: f64,
) -> Result<Coeffs1> {
    let corrected = corrected_frequency(params, k_amplitude)?;
    let shifted = params.with_omega0(corrected.omega0_corrected)?;
    Ok(a1_closed(&shifted, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_grid;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(b: f64, w0: f64, eps: f64) -> OscillatorParams {
        OscillatorParams::new(b, w0, eps).unwrap()
    }

    fn fig_grid() -> GridConfig {
        make_grid(20.0, 20.0).unwrap()
    }

    #[test]
    fn a0_vanishes_in_every_regime() {
        for p in [params(0.3, 2.0, 1.0), params(5.0, 2.0, 1.0), params(4.0, 2.0, 1.0)] {
            assert_eq!(a1_closed_at(&p, &fig_grid(), 0), 0.0);
        }
    }

    #[test]
    fn a1_underdamped_first_delay() {
        // 40-digit evaluation of T e^{-T b/2} sin(T wR)/wR
        let a = a1_closed_at(&params(0.3, 2.0, 1.0), &fig_grid(), 1);
        assert_relative_eq!(a, 0.023_707_178_689_763_926, max_relative = 1e-14);
    }

    #[test]
    fn a1_critical_third_delay() {
        let a = a1_closed_at(&params(4.0, 2.0, 1.0), &fig_grid(), 3);
        assert_relative_eq!(a, 0.028_843_509_572_799_059, max_relative = 1e-14);
        let t = PI / 20.0;
        assert_relative_eq!(a, t * 3.0 * t * (-3.0 * t * 2.0).exp(), max_relative = 1e-14);
    }

    #[test]
    fn a1_general_matches_regimes_and_is_real() {
        let grid = fig_grid();
        for p in [params(0.3, 2.0, 1.0), params(5.0, 2.0, 1.0), params(1.0, 7.0, 0.0)] {
            for k in 0..grid.len() {
                let g = a1_general_at(&p, &grid, k);
                assert!((g.re - a1_closed_at(&p, &grid, k)).abs() < 1e-12);
                assert!(g.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn a1_overdamped_long_horizon_stays_finite() {
        let p = params(200.0, 1.0, 0.0);
        let grid = make_grid(20.0, 200.0).unwrap();
        let a = a1_closed(&p, &grid);
        assert!(a.values().iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn a1_envelope_bounds() {
        let grid = fig_grid();
        let t = grid.step();
        let under = params(0.3, 2.0, 0.0);
        let wr = poles_of(&under).omega_r.unwrap();
        for k in 0..grid.len() {
            let kt = grid.delay(k);
            let bound = t * (-kt * 0.15).exp() / wr;
            assert!(a1_closed_at(&under, &grid, k).abs() <= bound * (1.0 + 1e-12));
        }
        let over = params(5.0, 2.0, 0.0);
        for k in 0..grid.len() {
            let kt = grid.delay(k);
            // lambda- = 1, lambda = 1.5
            assert!(a1_closed_at(&over, &grid, k) <= t * (-kt).exp() / 3.0 * (1.0 + 1e-12));
        }
        let crit = params(4.0, 2.0, 0.0);
        let peak = 2.0 / (4.0 * std::f64::consts::E);
        for k in 0..grid.len() {
            assert!(a1_closed_at(&crit, &grid, k) <= t * peak * (1.0 + 1e-12));
        }
    }

    #[test]
    fn a2_overdamped_entry() {
        // Independent 40-digit evaluation; quadrature of the triple-kernel
        // integral agrees to all printed digits.
        let a = a2_closed_at(&params(5.0, 2.0, 1.0), &fig_grid(), 2, 5);
        assert_relative_eq!(a, -8.926_497_242_057_575e-6, max_relative = 1e-12);
    }

    #[test]
    fn a2_table_symmetric_and_zero_on_boundary() {
        let grid = make_grid(20.0, 5.0).unwrap();
        for p in [params(0.3, 2.0, 1.0), params(5.0, 2.0, 1.0), params(4.0, 2.0, 1.0)] {
            let t = a2_closed(&p, &grid);
            for k in 0..t.dim() {
                assert!(t.get(0, k).abs() < 1e-18);
                for l in 0..t.dim() {
                    assert_eq!(t.get(k, l), t.get(l, k));
                    assert_eq!(a2_closed_at(&p, &grid, k, l), a2_closed_at(&p, &grid, l, k));
                }
            }
        }
    }

    #[test]
    fn a2_vanishes_without_anharmonicity() {
        let t = a2_closed(&params(0.3, 2.0, 0.0), &make_grid(20.0, 3.0).unwrap());
        assert!(t.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn a2_general_matches_regimes() {
        let grid = fig_grid();
        for p in [params(0.3, 2.0, 1.0), params(5.0, 2.0, 1.0), params(1.0, 3.0, -0.7)] {
            for &(k, l) in &[(1, 1), (2, 5), (17, 3), (40, 90), (128, 128)] {
                let g = a2_general_at(&p, &grid, k, l);
                let c = a2_closed_at(&p, &grid, k, l);
                assert!((g.re - c).abs() < 1e-14, "{p:?} ({k},{l}): {g} vs {c}");
                assert!(g.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn a2_degenerate_overdamped_is_continuous() {
        // 2 lambda- = lambda+ exactly when 9 w0^2 = 2 b^2
        let b = 3.0;
        let w0 = (2.0f64 / 9.0).sqrt() * b;
        let grid = fig_grid();
        let at = |w: f64| a2_closed(&params(b, w, 1.0), &grid);
        let exact = at(w0);
        assert!(exact.values().iter().all(|v| v.is_finite()));
        for delta in [1e-9, -1e-9, 1e-7, -1e-7] {
            let near = at(w0 * (1.0 + delta));
            assert!(near.max_abs_diff(&exact) <= 1e-5 * exact.max_abs());
        }
    }

    #[test]
    fn corrected_frequency_reference_values() {
        let c = corrected_frequency(&params(0.3, 2.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(c.omega0_corrected, 2.109_381_364_946_409_6, max_relative = 1e-14);
        assert_relative_eq!(
            c.omega_r_corrected.unwrap(),
            2.104_041_288_279_100_8,
            max_relative = 1e-14
        );
        let w0sq = c.omega0_corrected.powi(2);
        assert_relative_eq!(w0sq * w0sq - 4.0 * w0sq, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn corrected_frequency_unperturbed_cases() {
        let lin = corrected_frequency(&params(0.3, 2.0, 0.0), 1.0).unwrap();
        assert_eq!(lin.omega0_corrected, 2.0);
        assert_relative_eq!(lin.omega_r_corrected.unwrap(), 1.994_367_067_517_913, max_relative = 1e-14);
        let no_drive = corrected_frequency(&params(0.3, 2.0, 1.0), 0.0).unwrap();
        assert_eq!(no_drive.omega0_corrected, 2.0);
    }

    #[test]
    fn corrected_frequency_rejects_negative_discriminant() {
        // w0^4 + 8 eps K = 16 - 24 < 0
        let err = corrected_frequency(&params(0.3, 2.0, -3.0), 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(a1_resonance_corrected(&params(0.3, 2.0, -3.0), &fig_grid(), 1.0).is_err());
    }

    #[test]
    fn resonance_corrected_reduces_to_plain_when_linear() {
        let p = params(0.3, 2.0, 0.0);
        let grid = fig_grid();
        assert_eq!(a1_resonance_corrected(&p, &grid, 1.0).unwrap(), a1_closed(&p, &grid));
    }
}
