//! Time-domain synthesis from scattering coefficients, truncated at second
//! order:
//!
//! ```text
//! y1[j] = sum_{k <= min(j, N)} a_k x[j-k]
//! y2[j] = sum_{k, l <= min(j, N)} a_kl x[j-k] x[j-l]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_step, Coeffs1, Coeffs2, GridConfig, Signal};

/// Inputs used throughout: a step `K theta(t)` or a switched-on sine
/// `A sin(w t) theta(t)`, with `theta(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputKind {
    Step { amplitude: f64 },
    Sine { amplitude: f64, omega: f64 },
}

impl InputKind {
    /// Value at time `t` (zero before the origin).
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            InputKind::Step { amplitude } => amplitude,
            InputKind::Sine { amplitude, omega } => amplitude * (omega * t).sin(),
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputKind::Step { amplitude } => write!(f, "step:{amplitude}"),
            InputKind::Sine { amplitude, omega } => write!(f, "sine:{amplitude}:{omega}"),
        }
    }
}

/// Parses `step:K` or `sine:A:w`.
impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| -> Result<f64> {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("invalid number {p:?} in input spec {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::domain(format!("non-finite value in input spec {s:?}")))
            }
        };
        match parts.as_slice() {
            ["step", k] => Ok(InputKind::Step { amplitude: num(k)? }),
            ["sine", a, w] => Ok(InputKind::Sine {
                amplitude: num(a)?,
                omega: num(w)?,
            }),
            _ => Err(Error::domain(format!(
                "input spec {s:?} is not of the form step:K or sine:A:w"
            ))),
        }
    }
}

/// Samples the input on `t_j = jT`, `j = 0..=N`.
pub fn make_input(kind: InputKind, grid: &GridConfig) -> Signal {
    let samples = grid.times().into_iter().map(|t| kind.eval(t)).collect();
    Signal::new(grid.step(), samples).expect("grid step is positive")
}

pub fn synthesize_first(coeffs: &Coeffs1, input: &Signal) -> Result<Signal> {
    check_step(coeffs.grid().step(), input.step())?;
    let a = coeffs.values();
    let x = input.samples();
    let out = (0..x.len())
        .map(|j| {
            let kmax = j.min(a.len() - 1);
            (0..=kmax).map(|k| a[k] * x[j - k]).sum()
        })
        .collect();
    Signal::new(input.step(), out)
}

/// Second-order output using the table symmetry: diagonal terms once,
/// off-diagonal terms doubled. Cost is `O(J N^2)` for `J` output samples.
pub fn synthesize_second(coeffs: &Coeffs2, input: &Signal) -> Result<Signal> {
    check_step(coeffs.grid().step(), input.step())?;
    let x = input.samples();
    let dim = coeffs.dim();
    let mut window = Vec::with_capacity(dim);
    let out = (0..x.len())
        .map(|j| {
            let kmax = j.min(dim - 1);
            window.clear();
            window.extend((0..=kmax).map(|k| x[j - k]));
            let mut acc = 0.0;
            for k in 0..=kmax {
                let xk = window[k];
                if xk == 0.0 {
                    continue;
                }
                let row = coeffs.row(k);
                let mut off = 0.0;
                for l in k + 1..=kmax {
                    off += row[l] * window[l];
                }
                acc += xk * (row[k] * xk + 2.0 * off);
            }
            acc
        })
        .collect();
    Signal::new(input.step(), out)
}

/// First-order, second-order and total output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseBreakdown {
    pub first_order: Signal,
    pub second_order: Signal,
    pub total: Signal,
}

pub fn synthesize(c1: &Coeffs1, c2: &Coeffs2, input: &Signal) -> Result<ResponseBreakdown> {
    check_step(c1.grid().step(), c2.grid().step())?;
    let first_order = synthesize_first(c1, input)?;
    let second_order = synthesize_second(c2, input)?;
    let total = first_order
        .samples()
        .iter()
        .zip(second_order.samples())
        .map(|(a, b)| a + b)
        .collect();
    Ok(ResponseBreakdown {
        total: Signal::new(input.step(), total)?,
        first_order,
        second_order,
    })
}
