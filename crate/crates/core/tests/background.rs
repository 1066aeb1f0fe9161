use proptest::prelude::*;
use vdwe::background::{check_h3, sample_box, Background, BackgroundFlow, InitialVelocity, Quiescent};
use vdwe::checks::{background_profile, linspace, shooting_foot};

fn tanh_flow(dim: usize) -> BackgroundFlow {
    let u0 = InitialVelocity::LinearTanh { dim, slope: 1.0, amplitude: 0.1, scale: 1.0 };
    BackgroundFlow::new(u0, &sample_box(dim, 8.0, if dim == 1 { 201 } else { 21 })).unwrap()
}

#[test]
fn linear_flow_matches_closed_form() {
    let flow = BackgroundFlow::new(InitialVelocity::linear(2, 1.0), &sample_box(2, 4.0, 9)).unwrap();
    for t in [0.0, 1.0, 10.0, 100.0] {
        for x in [[0.5, -2.0], [3.0, 1.0]] {
            let s = flow.evaluate(t, x).unwrap();
            for (i, xi) in x.iter().enumerate() {
                assert!((s.velocity[i] - xi / (1.0 + t)).abs() < 1e-13);
                assert!((s.gradient[i][i] - 1.0 / (1.0 + t)).abs() < 1e-13);
                assert!(s.deviation[i][i].abs() < 1e-10);
            }
            assert!(s.gradient[0][1].abs() < 1e-15);
        }
    }
}

#[test]
fn compressive_data_is_rejected() {
    let u0 = InitialVelocity::linear(1, -0.5);
    assert!(!check_h3(&u0, &sample_box(1, 2.0, 11)).unwrap().holds());
    assert!(BackgroundFlow::new(u0, &sample_box(1, 2.0, 11)).is_err());
}

#[test]
fn rotation_keeps_the_gap() {
    let u0 = InitialVelocity::rotating(0.5);
    let h3 = check_h3(&u0, &sample_box(2, 2.0, 5)).unwrap();
    assert!(h3.holds());
    assert!((h3.min_real_part - 1.0).abs() < 1e-14);
}

#[test]
fn hessian_decays_like_inverse_cube() {
    let flow = tanh_flow(1);
    let times: Vec<f64> = linspace(1.0, 2.0, 11).into_iter().map(|e| 10f64.powf(e)).collect();
    let profile = background_profile(&flow, &times, &sample_box(1, 8.0, 401)).unwrap();
    let fit = profile.hessian_decay((10.0, 100.0)).unwrap();
    assert!((fit.exponent + 3.0).abs() < 0.1, "{}", fit.exponent);
}

#[test]
fn density_transport_matches_jacobian() {
    let flow = tanh_flow(2);
    let rho0 = |y: [f64; 2]| 1.0 + y[0] * y[0] * (-y[1] * y[1]).exp();
    for t in [0.3, 4.0] {
        for y in [[0.2, -0.7], [-1.5, 0.4]] {
            let u = flow.initial_velocity().value(y);
            let x = [y[0] + t * u[0], y[1] + t * u[1]];
            let got = flow.density_transport(rho0, t, x).unwrap();
            let exact = rho0(y) * (-flow.log_jacobian(t, y)).exp();
            assert!((got - exact).abs() < 1e-10 * exact);
        }
    }
}

#[test]
fn quiescent_background_is_at_rest() {
    let q = Quiescent { dim: 2 };
    let s = q.sample(3.0, [1.0, 2.0]).unwrap();
    assert_eq!(s.velocity, [0.0, 0.0]);
    assert_eq!(s.deviation[0][0], -4.0);
}

proptest! {
    #[test]
    fn foot_inverts_characteristics(x in -8.0f64..8.0, t in 0.0f64..50.0) {
        let flow = tanh_flow(1);
        let y = flow.foot(t, [x, 0.0]).unwrap()[0];
        let u0 = flow.initial_velocity().value([y, 0.0])[0];
        prop_assert!((y + t * u0 - x).abs() <= 1e-11 * (1.0 + x.abs()));
        let shot = shooting_foot(flow.initial_velocity(), t, x).unwrap();
        prop_assert!((shot - y).abs() <= 1e-10);
    }

    #[test]
    fn deviation_stays_bounded(x in -8.0f64..8.0, t in 0.0f64..100.0) {
        let s = tanh_flow(1).evaluate(t, [x, 0.0]).unwrap();
        prop_assert!(s.deviation[0][0].abs() <= 0.1 + 1e-12);
    }
}
