//! Integrates the default reference problem (d = 1, gamma0 = 3, b = 0.5,
//! eps = 1e-2, N = 2048, T = 50) and prints decay fits, positivity and
//! conservation diagnostics.
//!
//! `cargo run --release --example reference_run [t_end]`

use vdwe::io::Config;
use vdwe::solver::run::run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = Config::default();
    if let Some(t) = std::env::args().nth(1) {
        config.run.t_end = t.parse()?;
        config.diagnostics.fit_end = config.diagnostics.fit_end.min(config.run.t_end);
        config.diagnostics.fit_start = config.diagnostics.fit_start.min(0.1 * config.run.t_end);
    }
    // record the undershoot instead of aborting on it
    config.scheme.positivity_tolerance = 1.0;

    let started = std::time::Instant::now();
    let out = match run(&config) {
        Ok(out) => out,
        Err(failure) => {
            eprintln!("run stopped: {}", failure.error);
            *failure.partial.ok_or(failure.error)?
        }
    };
    println!("{} steps in {:.1?}", out.steps, started.elapsed());
    for e in &out.events {
        println!("event t={:.3} {:?}: {}", e.t, e.kind, e.message);
    }

    let window = (config.diagnostics.fit_start, config.diagnostics.fit_end);
    for k in 0..=config.diagnostics.m {
        let fit = out.series.fit(k, window)?;
        let predicted = out.series.config.predicted_exponent(k);
        println!("Y{k}: fitted exponent {:+.3} (predicted {:+.3}, rms {:.1e})", fit.exponent, predicted, fit.residual);
    }
    println!("relative undershoot of pi: {:.3e}", out.relative_undershoot());
    let max_rho = out.series.rows.iter().map(|r| r.max_rho).fold(0.0, f64::max);
    println!("max rho * b: {:.6}", max_rho * config.gas.covolume);
    println!("worst conservation drift: {:.3e}", out.worst_drift.max());
    let envelope = out.series.envelope(out.comparison_exponent)?;
    println!(
        "envelope constant {:.4}, holds: {} (worst ratio {:.3})",
        out.series.constant, envelope.holds, envelope.worst_ratio
    );
    Ok(())
}
