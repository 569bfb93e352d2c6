mod common;

use common::{a2_quadrature, double_sum, impulse, linspace, max_abs_diff, params};
use scattering::{
    a1_closed, a1_closed_at, a2_closed, a2_closed_at, h1, h2, integrate_exact, make_grid, make_input,
    synthesize_first, synthesize_second, InputKind, IntegratorConfig, Signal,
};

#[test]
fn a1_is_sampled_impulse_response() {
    for (b, w0) in [(0.3, 2.0), (5.0, 2.0), (4.0, 2.0), (1.0, 0.3)] {
        let p = params(b, w0, 1.0);
        let grid = make_grid(20.0, 20.0).unwrap();
        let c = a1_closed(&p, &grid);
        let direct: Vec<f64> = grid.times().iter().map(|&t| grid.step() * impulse(b, w0, t)).collect();
        assert!(max_abs_diff(c.values(), &direct) < 1e-14, "b={b} w0={w0}");
    }
}

#[test]
fn a2_matches_quadrature_in_every_regime() {
    // The last set sits on the removable singularity 9 w0^2 = 2 b^2.
    let cases = [(0.3, 2.0), (5.0, 2.0), (4.0, 2.0), (1.0, 2.0), (3.0, 2.0_f64.sqrt())];
    for (b, w0) in cases {
        let p = params(b, w0, 1.0);
        let grid = make_grid(20.0, 6.0).unwrap();
        let scale = a2_closed(&p, &grid).max_abs();
        for k in (0..grid.len()).step_by(3) {
            for l in (k..grid.len()).step_by(4) {
                let q = a2_quadrature(&p, &grid, k, l);
                let c = a2_closed_at(&p, &grid, k, l);
                assert!((q - c).abs() <= 1e-10 * scale, "b={b} w0={w0} k={k} l={l}: {c} vs {q}");
            }
        }
    }
}

#[test]
fn frozen_reference_values() {
    let grid = make_grid(20.0, 20.0).unwrap();
    assert!((a1_closed_at(&params(0.3, 2.0, 1.0), &grid, 1) - 0.023_707_178_689_763_926).abs() < 1e-17);
    assert!((a1_closed_at(&params(4.0, 2.0, 1.0), &grid, 3) - 0.028_843_509_572_799_06).abs() < 1e-17);
    let v = a2_closed_at(&params(5.0, 2.0, 1.0), &grid, 2, 5);
    assert!((v / -8.926_497_242_057_575e-6 - 1.0).abs() < 1e-12);
}

#[test]
fn symmetric_synthesis_equals_double_sum() {
    let p = params(0.3, 2.0, 1.0);
    let grid = make_grid(20.0, 10.0).unwrap();
    let c2 = a2_closed(&p, &grid);
    let x = make_input(InputKind::Sine { amplitude: 1.3, omega: 0.9 }, &grid);
    let fast = synthesize_second(&c2, &x).unwrap();
    let (slow, mag) = double_sum(&c2, &x);
    for j in 0..slow.len() {
        assert!((fast.samples()[j] - slow[j]).abs() <= 1e-14 * mag[j].max(f64::MIN_POSITIVE));
    }
}

#[test]
fn second_order_is_not_additive() {
    let p = params(0.3, 2.0, 1.0);
    let grid = make_grid(20.0, 20.0).unwrap();
    let c1 = a1_closed(&p, &grid);
    let c2 = a2_closed(&p, &grid);
    let x1 = make_input(InputKind::Sine { amplitude: 1.0, omega: 0.5 }, &grid);
    let x2 = make_input(InputKind::Sine { amplitude: 1.0, omega: 1.7 }, &grid);
    let sum: Vec<f64> = x1.samples().iter().zip(x2.samples()).map(|(a, b)| a + b).collect();
    let xs = Signal::new(grid.step(), sum).unwrap();

    let y1 = |x: &Signal| synthesize_first(&c1, x).unwrap().into_samples();
    let lin = max_abs_diff(
        &y1(&xs),
        &y1(&x1).iter().zip(y1(&x2)).map(|(a, b)| a + b).collect::<Vec<_>>(),
    );
    assert!(lin < 1e-13);

    let y2 = |x: &Signal| synthesize_second(&c2, x).unwrap().into_samples();
    let both = y2(&xs);
    let cross = max_abs_diff(&both, &y2(&x1).iter().zip(y2(&x2)).map(|(a, b)| a + b).collect::<Vec<_>>());
    let scale = both.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(cross > 0.1 * scale, "cross terms {cross} vs {scale}");
}

#[test]
fn oracle_is_fourth_order() {
    let p = params(0.3, 2.0, 1.0);
    let grid = make_grid(20.0, 20.0).unwrap();
    let kind = InputKind::Sine { amplitude: 1.0, omega: 0.5 };
    let x = make_input(kind, &grid);
    let run = |n: usize| {
        let cfg = IntegratorConfig::analytic(kind).with_substeps(n).unwrap();
        integrate_exact(&p, &x, &cfg).unwrap().into_samples()
    };
    let reference = run(200);
    let (coarse, fine) = (max_abs_diff(&run(2), &reference), max_abs_diff(&run(4), &reference));
    assert!(coarse / fine >= 8.0, "ratio {}", coarse / fine);
}

#[test]
fn kernel_sampled_on_grid_is_finite_and_hermitian() {
    let p = params(0.3, 2.0, 1.0);
    for w in linspace(-20.0, 20.0, 41) {
        assert_eq!(h1(&p, -w), h1(&p, w).conj());
        for v in linspace(-20.0, 20.0, 9) {
            let z = h2(&p, w, v);
            assert!(z.re.is_finite() && z.im.is_finite());
            assert!((h2(&p, -w, -v) - z.conj()).norm() <= 1e-15 * z.norm());
        }
    }
}

/// Max deviation of the first- and second-order tables at `w0 = b/2 (1 + delta)`
/// from the critical tables, relative to their maxima.
fn near_critical_deviation(b: f64, delta: f64) -> f64 {
    let grid = make_grid(20.0, 20.0).unwrap();
    let crit = params(b, 0.5 * b, 1.0);
    let p = params(b, 0.5 * b * (1.0 + delta), 1.0);
    let (c1, c2) = (a1_closed(&crit, &grid), a2_closed(&crit, &grid));
    let d1 = max_abs_diff(a1_closed(&p, &grid).values(), c1.values()) / c1.max_abs();
    let d2 = a2_closed(&p, &grid).max_abs_diff(&c2) / c2.max_abs();
    d1.max(d2)
}

#[test]
fn near_critical_tables_converge_linearly() {
    for b in [1.0, 4.0] {
        for sign in [-1.0, 1.0] {
            let coarse = near_critical_deviation(b, sign * 1e-4);
            let fine = near_critical_deviation(b, sign * 1e-5);
            assert!(coarse / fine > 5.0 && coarse / fine < 20.0, "b={b}: {coarse} -> {fine}");
            for delta in [1e-7, 1e-9, 1e-11, 1e-13] {
                assert!(near_critical_deviation(b, sign * delta) <= 1e-6, "b={b} delta={delta}");
            }
        }
    }
}
