use std::f64::consts::PI;

use proptest::prelude::*;
use vdwe::diagnostics::{
    calibrate_constant, decay_fit, sobolev_norms, sobolev_norms_fd, ComparisonFunction, NormConfig,
};
use vdwe::solver::init::bump;
use vdwe::solver::{FieldSet, Grid};
use vdwe::symsys::Formulation;

/// Adaptive Simpson quadrature, used as an independent oracle.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

fn one_component(grid: Grid, f: impl Fn(f64) -> f64) -> FieldSet {
    let mut fields = FieldSet::zeros(grid, false);
    for i in 0..grid.len() {
        fields.components[0][i] = f(grid.axis_coord(i));
    }
    fields
}

#[test]
fn bump_l2_norm_matches_quadrature() {
    let eps = 1e-2;
    let grid = Grid::centered(1, 2048, 4.0).unwrap();
    let fields = one_component(grid, |x| eps * bump(x));
    let y0 = sobolev_norms(&fields, 2, Formulation::Isentropic, |_| 1.0).plain[0];
    let oracle = eps * simpson(&|x| bump(x).powi(2), -1.0, 1.0, 1e-15).sqrt();
    assert!((y0 - oracle).abs() <= 1e-10 * oracle, "{y0} vs {oracle}");
}

#[test]
fn sine_norms_are_exact() {
    let grid = Grid::centered(1, 64, PI).unwrap();
    let fields = one_component(grid, |x| (3.0 * x).sin());
    let norms = sobolev_norms(&fields, 3, Formulation::Isentropic, |_| 1.0);
    for (k, y) in norms.plain.iter().enumerate() {
        let exact = 3f64.powi(k as i32) * PI.sqrt();
        assert!((y - exact).abs() < 1e-12 * exact, "k = {k}: {y} vs {exact}");
    }
}

#[test]
fn spectral_and_difference_norms_agree_on_resolved_fields() {
    let grid = Grid::centered(1, 1024, 8.0).unwrap();
    let fields = one_component(grid, |x| bump(x / 3.0) + 0.5 * bump((x - 1.0) / 2.0));
    let spectral = sobolev_norms(&fields, 2, Formulation::Isentropic, |_| 1.0).plain;
    let fd = sobolev_norms_fd(&fields, 2);
    for (a, b) in spectral.iter().zip(&fd) {
        assert!((a - b).abs() <= 1e-6 * a, "{a} vs {b}");
    }
}

#[test]
fn isentropic_weights_are_consistent() {
    for dim in [1, 2] {
        for gamma0 in [1.4, 2.0, 3.0] {
            let c = NormConfig::new(2, dim, gamma0, Formulation::Isentropic).unwrap();
            assert_eq!(c.beta, 0.0);
            for k in 0..=2 {
                assert_eq!(k as f64 + c.rate_shift, c.exponents[k] + c.growth);
            }
        }
    }
    let c = NormConfig::new(2, 1, 3.0, Formulation::Isentropic).unwrap();
    assert_eq!((c.rate_shift, c.growth), (0.5, 2.0));
    let g = NormConfig::new(2, 1, 3.0, Formulation::General { theta: 1.0 }).unwrap();
    assert_eq!((g.rate_shift, g.growth), (0.0, 1.5));
}

#[test]
fn comparison_function_values() {
    let f = ComparisonFunction::new(2.0, 2.0, 0.3).unwrap();
    assert!((f.f(1.0) - 0.5 * 0.5f64.ln()).abs() < 1e-15);
    for x in [0.01, 0.1, 1.0, 10.0] {
        assert!((f.f_inverse(f.f(x)).unwrap() - x).abs() <= 1e-14 * x.max(1.0));
    }
    let samples: Vec<f64> = (1..200).map(|i| i as f64 * 0.05).collect();
    assert!(samples.windows(2).all(|w| f.f(w[0]) < f.f(w[1])));
    assert!(f.f(1e-300) < -600.0);
    assert!((f.envelope(0.2, 0.0) - 0.2).abs() < 1e-15);
    assert!(f.f_inverse(0.0).is_err());
    assert!(ComparisonFunction::new(1.5, 2.0, 0.0).is_err());
}

#[test]
fn envelope_beyond_threshold_blows_up() {
    let f = ComparisonFunction::new(2.0, 2.0, 1.0).unwrap();
    let big = 2.0 * f.threshold().unwrap();
    assert!(f.envelope(big, 1e6).is_infinite());
    assert!(f.envelope(0.5 * f.threshold().unwrap(), 1e6).is_finite());
}

#[test]
fn calibration_finds_the_smallest_constant() {
    // zeta grows at first: Z(t) = (1 + t)^-2 (1 + 0.2 t) with a = 2
    let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let z: Vec<f64> = times.iter().map(|t| 0.1 * (1.0 + 0.2 * t) / (1.0 + t).powi(2)).collect();
    let c = calibrate_constant(&times, &z, 2.0, 2.0, 1.0).unwrap();
    assert!(c > 0.0);
    let zeta =
        |c: f64| times.iter().zip(&z).map(|(t, z)| (1.0 + t).powi(2) * (c / (1.0 + t)).exp() * z).collect::<Vec<_>>();
    assert!(ComparisonFunction::new(2.0, 2.0, c).unwrap().check(&times, &zeta(c)).holds);
    let below = 0.99 * c;
    assert!(!ComparisonFunction::new(2.0, 2.0, below).unwrap().check(&times, &zeta(below)).holds);
}

proptest! {
    #[test]
    fn fit_recovers_power_laws(p in -4.0f64..0.5, c in 1e-6f64..10.0) {
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.5).collect();
        let values: Vec<f64> = times.iter().map(|t| c * (1.0 + t).powf(p)).collect();
        let fit = decay_fit(&times, &values, 0, (5.0, 50.0)).unwrap();
        prop_assert!((fit.exponent - p).abs() < 1e-10);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
    }
}

#[test]
fn fit_rejects_bad_windows() {
    let t = [0.0, 1.0, 2.0];
    let y = [1.0, 0.5, 0.25];
    assert!(decay_fit(&t, &y, 0, (1.0, 1.0)).is_err());
    assert!(decay_fit(&t, &y, 0, (0.0, 5.0)).is_err());
    assert!(decay_fit(&t, &y[..2], 0, (0.0, 1.0)).is_err());
}
