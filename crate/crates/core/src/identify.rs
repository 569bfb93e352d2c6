//! Linear identification: recover first-order coefficients from samples of
//! the frequency response by least squares.
//!
//! With `w~ = pi w / w_M` the band-limited response is
//! `H1(w) = sum_k a_k e^{-j k w~}`, so
//!
//! ```text
//! Re H1(w_i) =  sum_k a_k cos(k w~_i)
//! Im H1(w_i) = -sum_k a_k sin(k w~_i)
//! ```
//!
//! Each sampled real or imaginary part gives one linear equation in the
//! `a_k`. The imaginary block has an all-zero first column, so imaginary-only
//! data cannot fix `a_0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Coeffs1, GridConfig, Signal};
use crate::response::synthesize_first;

/// Largest accepted ratio of extreme singular values.
pub const MAX_CONDITION: f64 = 1e12;

/// Frequency-response samples. Both parts, when present, are taken at the
/// same frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqSamples {
    omegas: Vec<f64>,
    re_h: Option<Vec<f64>>,
    im_h: Option<Vec<f64>>,
}

impl FreqSamples {
    pub fn new(omegas: Vec<f64>, re_h: Option<Vec<f64>>, im_h: Option<Vec<f64>>) -> Result<Self> {
        if re_h.is_none() && im_h.is_none() {
            return Err(Error::NoData);
        }
        if let Some(w) = omegas.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::domain(format!("sample frequency {w} must be finite and non-negative")));
        }
        for (name, block) in [("real", &re_h), ("imaginary", &im_h)] {
            if let Some(v) = block {
                if v.len() != omegas.len() {
                    return Err(Error::domain(format!(
                        "{name} part has {} values for {} frequencies",
                        v.len(),
                        omegas.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::domain(format!("{name} part contains a non-finite value")));
                }
            }
        }
        Ok(Self { omegas, re_h, im_h })
    }

    /// Samples a known response at `omegas`, keeping the requested parts.
    pub fn from_fn<F>(omegas: Vec<f64>, real: bool, imag: bool, mut h: F) -> Result<Self>
    where
        F: FnMut(f64) -> Complex64,
    {
        let values: Vec<Complex64> = omegas.iter().map(|&w| h(w)).collect();
        let re = real.then(|| values.iter().map(|z| z.re).collect());
        let im = imag.then(|| values.iter().map(|z| z.im).collect());
        Self::new(omegas, re, im)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn re_h(&self) -> Option<&[f64]> {
        self.re_h.as_deref()
    }

    pub fn im_h(&self) -> Option<&[f64]> {
        self.im_h.as_deref()
    }

    /// Number of scalar equations, `N1 + N2`.
    pub fn rows(&self) -> usize {
        self.re_h.as_ref().map_or(0, Vec::len) + self.im_h.as_ref().map_or(0, Vec::len)
    }

    /// Stacked right-hand side, real block first.
    fn rhs(&self) -> DVector<f64> {
        let re = self.re_h.iter().flatten();
        let im = self.im_h.iter().flatten();
        DVector::from_iterator(self.rows(), re.chain(im).copied())
    }
}

/// Stacked design matrix: cosine rows for the real samples, then negated sine
/// rows for the imaginary samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    matrix: DMatrix<f64>,
    real_rows: usize,
    imag_rows: usize,
    grid: GridConfig,
}

impl DesignMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn real_rows(&self) -> usize {
        self.real_rows
    }

    pub fn imag_rows(&self) -> usize {
        self.imag_rows
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.ncols()
    }

    /// Ratio of largest to smallest singular value.
    pub fn condition(&self) -> f64 {
        condition_of(&self.matrix)
    }
}

fn condition_of(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn build_design(samples: &FreqSamples, grid: &GridConfig) -> Result<DesignMatrix> {
    let wm = grid.omega_max();
    if let Some(&w) = samples.omegas.iter().find(|&&w| w > wm * (1.0 + 1e-12)) {
        return Err(Error::OutOfBand { omega: w, omega_max: wm });
    }
    let cols = grid.len();
    let real_rows = samples.re_h.as_ref().map_or(0, Vec::len);
    let imag_rows = samples.im_h.as_ref().map_or(0, Vec::len);
    if real_rows + imag_rows == 0 {
        return Err(Error::NoData);
    }
    let scaled: Vec<f64> = samples.omegas.iter().map(|w| std::f64::consts::PI * w / wm).collect();
    let mut matrix = DMatrix::zeros(real_rows + imag_rows, cols);
    if real_rows > 0 {
        for (i, wt) in scaled.iter().enumerate() {
            for k in 0..cols {
                matrix[(i, k)] = (k as f64 * wt).cos();
            }
        }
    }
    if imag_rows > 0 {
        for (i, wt) in scaled.iter().enumerate() {
            for k in 1..cols {
                matrix[(real_rows + i, k)] = -(k as f64 * wt).sin();
            }
        }
    }
    Ok(DesignMatrix {
        matrix,
        real_rows,
        imag_rows,
        grid: *grid,
    })
}

/// Result of a least-squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    pub coeffs: Coeffs1,
    /// Set when only imaginary parts were supplied; `a_0` is then reported as 0.
    pub a0_indeterminate: bool,
    /// Condition estimate of the matrix actually solved.
    pub condition: f64,
    /// Euclidean norm of `M a - F`.
    pub residual: f64,
}

/// Columns actually solved for: column 0 is dropped when it is identically
/// zero (imaginary-only data).
fn active_system(design: &DesignMatrix, data: &FreqSamples) -> Result<(DMatrix<f64>, DVector<f64>, bool)> {
    let expected = (
        data.re_h.as_ref().map_or(0, Vec::len),
        data.im_h.as_ref().map_or(0, Vec::len),
    );
    if expected != (design.real_rows, design.imag_rows) {
        return Err(Error::domain("measurement data does not match the design matrix layout"));
    }
    let skip_a0 = design.real_rows == 0;
    let m = if skip_a0 {
        design.matrix.columns(1, design.unknowns() - 1).into_owned()
    } else {
        design.matrix.clone()
    };
    if m.nrows() <= design.grid.n_coeffs() {
        return Err(Error::Underdetermined {
            rows: m.nrows(),
            unknowns: design.unknowns(),
        });
    }
    Ok((m, data.rhs(), skip_a0))
}

fn assemble(design: &DesignMatrix, solved: &DVector<f64>, skip_a0: bool) -> Result<Coeffs1> {
    let mut values = Vec::with_capacity(design.unknowns());
    if skip_a0 {
        values.push(0.0);
    }
    values.extend(solved.iter().copied());
    Coeffs1::new(design.grid, values)
}

/// Least-squares coefficients through a singular value decomposition.
pub fn solve_coeffs(design: &DesignMatrix, data: &FreqSamples) -> Result<Identification> {
    let (m, f, skip_a0) = active_system(design, data)?;
    let svd = m.clone().svd(true, true);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    let condition = if min == 0.0 { f64::INFINITY } else { max / min };
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::RankDeficient { condition });
    }
    let a = svd.solve(&f, 0.0).map_err(|e| Error::domain(e.to_string()))?;
    let residual = (&m * &a - &f).norm();
    Ok(Identification {
        coeffs: assemble(design, &a, skip_a0)?,
        a0_indeterminate: skip_a0,
        condition,
        residual,
    })
}

/// Textbook solution `a = (M^T M)^{-1} M^T F` via Cholesky. Squares the
/// condition number; kept as an independent check on [`solve_coeffs`].
pub fn normal_equations_solution(design: &DesignMatrix, data: &FreqSamples) -> Result<Coeffs1> {
    let (m, f, skip_a0) = active_system(design, data)?;
    let mt = m.transpose();
    let gram = &mt * &m;
    let chol = gram.cholesky().ok_or(Error::RankDeficient {
        condition: f64::INFINITY,
    })?;
    let a = chol.solve(&(mt * f));
    assemble(design, &a, skip_a0)
}

/// Partial Fourier sum `sum_k a_k e^{-j k w~}`.
pub fn reconstruct_h1(coeffs: &Coeffs1, omega: f64) -> Result<Complex64> {
    let wm = coeffs.grid().omega_max();
    if !omega.is_finite() || omega.abs() > wm * (1.0 + 1e-12) {
        return Err(Error::OutOfBand { omega, omega_max: wm });
    }
    let wt = std::f64::consts::PI * omega / wm;
    Ok(coeffs
        .values()
        .iter()
        .enumerate()
        .map(|(k, a)| a * Complex64::from_polar(1.0, -(k as f64) * wt))
        .sum())
}

/// Time response predicted from (identified) first-order coefficients.
pub fn predict_response(coeffs: &Coeffs1, input: &Signal) -> Result<Signal> {
    synthesize_first(coeffs, input)
}
