//! Solves the Burgers background by characteristics for
//! `u0 = x + 0.1 tanh(x)` and reports how the deviation from the linear
//! flow and the Hessian decay in time.
//!
//! `cargo run --release --example burgers_background`

use vdwe::background::{sample_box, BackgroundFlow, InitialVelocity};
use vdwe::checks::{background_profile, linspace, shooting_error};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u0 = InitialVelocity::LinearTanh { dim: 1, slope: 1.0, amplitude: 0.1, scale: 1.0 };
    let flow = BackgroundFlow::new(u0.clone(), &sample_box(1, 8.0, 401))?;
    println!("spectral gap of Du0 on the box: {:.4}", flow.h3().gap);

    for t in [0.0, 1.0, 10.0] {
        let s = flow.evaluate(t, [2.0, 0.0])?;
        println!("t = {t:>4}: ubar(2) = {:.10}, foot = {:.10}", s.velocity[0], flow.foot(t, [2.0, 0.0])?[0]);
    }
    let err = shooting_error(&u0, &[0.5, 10.0, 100.0], &linspace(-8.0, 8.0, 21))?;
    println!("Newton inversion vs shooting: {err:.2e}");

    let times: Vec<f64> = linspace(-1.0, 2.0, 31).into_iter().map(|e| 10f64.powf(e)).collect();
    let profile = background_profile(&flow, &times, &sample_box(1, 8.0, 401))?;
    let fit = profile.hessian_decay((10.0, 100.0))?;
    println!("sup |K| = {:.5}; sup |D^2 ubar| ~ (1+t)^{:.3}", profile.max_deviation(), fit.exponent);
    Ok(())
}
