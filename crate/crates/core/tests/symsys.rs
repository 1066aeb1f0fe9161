use proptest::prelude::*;
use vdwe::symsys::{
    assemble_symbol, classical_symmetrizer, coupling, local_speed_bound, residual, Formulation, PointJet,
    SymmetrizedState,
};
use vdwe::thermo::GasParameters;

fn gas_strategy() -> impl Strategy<Value = GasParameters> {
    (prop::sample::select(vec![1.4, 2.0, 3.0]), prop::sample::select(vec![0.0, 0.1, 1.0]))
        .prop_map(|(g, b)| GasParameters::with_gamma(b, g).unwrap())
}

fn direction(angle: f64, dim: usize) -> Vec<f64> {
    if dim == 1 {
        vec![if angle.sin() >= 0.0 { 1.0 } else { -1.0 }]
    } else {
        vec![angle.cos(), angle.sin()]
    }
}

proptest! {
    #[test]
    fn symmetrizer_symmetrizes(
        gas in gas_strategy(),
        dim in 1usize..=2,
        angle in 0.0f64..6.3,
        pi in prop_oneof![Just(0.0), 0.0f64..3.0],
        u in prop::array::uniform2(-2.0f64..2.0),
        s in -1.0f64..1.0,
    ) {
        let state = SymmetrizedState { pi, velocity: u[..dim].to_vec(), entropy: s };
        let symbol = assemble_symbol(&direction(angle, dim), &state, &gas).unwrap();
        let scale = symbol.symmetrized().amax().max(f64::MIN_POSITIVE);
        prop_assert!(symbol.asymmetry() <= 1e-13 * scale);
    }

    #[test]
    fn speeds_stay_below_the_bound(
        gas in gas_strategy(),
        angle in 0.0f64..6.3,
        pi in 0.0f64..3.0,
        u in prop::array::uniform2(-2.0f64..2.0),
        s in -1.0f64..1.0,
    ) {
        let state = SymmetrizedState { pi, velocity: u.to_vec(), entropy: s };
        let symbol = assemble_symbol(&direction(angle, 2), &state, &gas).unwrap();
        let speed = (u[0] * u[0] + u[1] * u[1]).sqrt();
        let bound = local_speed_bound(pi, speed, s, &gas, Formulation::General { theta: 0.2 });
        prop_assert!(symbol.spectral_radius() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn classical_symbol_is_symmetrized(gas in gas_strategy(), f in 1e-6f64..0.9, u in -2.0f64..2.0, s in -1.0f64..1.0) {
        let rho = if gas.covolume > 0.0 { f / gas.covolume } else { 10.0 * f };
        let symbol = classical_symmetrizer(rho, &[u], s, &[1.0], &gas).unwrap();
        prop_assert!(symbol.asymmetry() <= 1e-13 * symbol.symmetrized().amax());
    }
}

#[test]
fn vacuum_symbol_is_pure_transport() {
    let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
    let state = SymmetrizedState { pi: 0.0, velocity: vec![0.3, -0.2], entropy: 0.1 };
    let symbol = assemble_symbol(&[1.0, 0.0], &state, &gas).unwrap();
    for l in symbol.eigenvalues() {
        assert!((l - 0.3).abs() < 1e-15);
    }
    assert_eq!(coupling(0.0, 0.1, &gas), 0.0);
}

#[test]
fn coupling_reduces_to_linear_for_ideal_gas() {
    let gas = GasParameters::with_gamma(0.0, 3.0).unwrap();
    assert!((coupling(0.7, 0.0, &gas) - 0.7).abs() < 1e-15);
}

#[test]
fn dimension_mismatch_is_rejected() {
    let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
    let state = SymmetrizedState { pi: 1.0, velocity: vec![0.0], entropy: 0.0 };
    assert!(assemble_symbol(&[1.0, 0.0], &state, &gas).is_err());
}

#[test]
fn constant_state_has_zero_residual() {
    let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
    let jet = PointJet {
        pi: 0.4,
        u: vec![0.2],
        s: 0.1,
        pi_t: 0.0,
        u_t: vec![0.0],
        s_t: 0.0,
        grad_pi: vec![0.0],
        grad_u: vec![0.0],
        grad_s: vec![0.0],
    };
    let r = residual(&jet, &gas, Formulation::General { theta: 1.0 }).unwrap();
    assert!(r.iter().all(|v| v.abs() < 1e-15), "{r:?}");
}

/// Pushes a point state of the classical isentropic Euler equations in
/// `(rho, u)` through the change of variables by the chain rule; the
/// `(pi, u)` residual must vanish.
#[test]
fn euler_state_solves_the_symmetrized_system() {
    let (b, g0) = (0.5, 3.0);
    let gas = GasParameters::with_gamma(b, g0).unwrap();
    let (rho, rho_x, u, u_x) = (0.3, 0.2, 0.4, -0.1);
    let q = rho / (1.0 - b * rho);
    let dq = 1.0 / (1.0 - b * rho).powi(2);
    let kappa = (g0 - 1.0) / 2.0;
    let scale = 2.0 * (g0 / (g0 - 1.0)).sqrt();
    let dpi = scale * kappa * q.powf(kappa - 1.0) * dq;
    let dp = (g0 - 1.0) * g0 * q.powf(g0 - 1.0) * dq;
    let rho_t = -(u * rho_x + rho * u_x);
    let u_t = -u * u_x - dp * rho_x / rho;
    let jet = PointJet {
        pi: scale * q.powf(kappa),
        u: vec![u],
        s: 0.0,
        pi_t: dpi * rho_t,
        u_t: vec![u_t],
        s_t: 0.0,
        grad_pi: vec![dpi * rho_x],
        grad_u: vec![u_x],
        grad_s: vec![0.0],
    };
    let r = residual(&jet, &gas, Formulation::Isentropic).unwrap();
    assert!(r.iter().all(|v| v.abs() < 1e-14), "{r:?}");
}
