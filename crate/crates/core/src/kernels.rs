//! Frequency-domain Volterra kernels of the anharmonic oscillator.

use num_complex::Complex64;

use crate::model::OscillatorParams;

/// Linear kernel `1 / (-w^2 + j b w + w0^2)`.
pub fn h1(params: &OscillatorParams, omega: f64) -> Complex64 {
    let w0 = params.omega0();
    Complex64::new(w0 * w0 - omega * omega, params.b() * omega).inv()
}

/// Second-order kernel `-eps H1(w1) H1(w2) H1(w1 + w2)`.
///
/// The denominator at the sum frequency is `1 / H1(w1 + w2)`, so the kernel
/// is a product of three linear kernels. The product is formed in a fixed
/// order of the two symmetric factors so `h2(a, b) == h2(b, a)` bit for bit.
pub fn h2(params: &OscillatorParams, omega1: f64, omega2: f64) -> Complex64 {
    let eps = params.epsilon();
    if eps == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (lo, hi) = if omega1 <= omega2 {
        (omega1, omega2)
    } else {
        (omega2, omega1)
    };
    -eps * h1(params, lo) * h1(params, hi) * h1(params, omega1 + omega2)
}
