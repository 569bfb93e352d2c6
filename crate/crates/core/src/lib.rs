//! Scattering coefficients for weakly nonlinear oscillators.
//!
//! The first two Volterra kernels of the damped anharmonic oscillator
//! `y'' + b y' + w0^2 y + eps y^2 = x(t)` are expanded in Fourier series over
//! the band `[-w_M, w_M]`. The expansion coefficients double as weights of a
//! causal discrete-time filter on the grid `t_k = k pi / w_M`, which gives a
//! direct map between the frequency description and the time response.
//!
//! ```
//! use scattering::{a1_closed, a2_closed, make_grid, make_input, synthesize, InputKind, OscillatorParams};
//!
//! let params = OscillatorParams::new(0.3, 2.0, 1.0)?;
//! let grid = make_grid(20.0, 20.0)?;
//! let input = make_input(InputKind::Sine { amplitude: 1.0, omega: 0.5 }, &grid);
//! let out = synthesize(&a1_closed(&params, &grid), &a2_closed(&params, &grid), &input)?;
//! assert_eq!(out.total.len(), grid.len());
//! # Ok::<(), scattering::Error>(())
//! ```

pub mod closed_form;
pub mod error;
pub mod identify;
pub mod kernels;
pub mod model;
pub mod oracle;
pub mod recurrence;
pub mod response;

pub use closed_form::{
    a1_closed, a1_closed_at, a1_general, a1_general_at, a1_resonance_corrected, a2_closed, a2_closed_at,
    a2_general_at, corrected_frequency, CorrectedFrequency,
};
pub use error::{Error, Result};
pub use identify::{
    build_design, normal_equations_solution, predict_response, reconstruct_h1, solve_coeffs, DesignMatrix,
    FreqSamples, Identification,
};
pub use kernels::{h1, h2};
pub use model::{
    classify, make_grid, poles_of, relative_rms, Coeffs1, Coeffs2, GridConfig, OscillatorParams, Poles, Regime,
    Signal,
};
pub use oracle::{
    estimate_frequency, integrate_correction, integrate_exact, integrate_linear, integrate_perturbative, Drive,
    IntegratorConfig,
};
pub use recurrence::{a1_recurrence, a2_recurrence, characteristic_roots, spectral_radius};
pub use response::{make_input, synthesize, synthesize_first, synthesize_second, InputKind, ResponseBreakdown};
