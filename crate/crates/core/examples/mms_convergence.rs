//! Manufactured-solution convergence of the method-of-lines scheme in space
//! and in time, for both formulations.
//!
//! `cargo run --release --example mms_convergence`

use vdwe::io::Config;
use vdwe::solver::mms::{space_convergence, time_convergence};
use vdwe::solver::run::scheme_config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for general in [false, true] {
        let mut config = Config::default();
        config.scheme.general = general;
        let gas = config.gas_parameters()?;
        let scheme = scheme_config(&config);
        let space = space_convergence(gas, scheme, &[64, 128, 256, 512], 1.0)?;
        let time = time_convergence(gas, scheme, 128, &[128, 256, 512], 8, 1.0)?;
        println!("{} formulation", if general { "general" } else { "isentropic" });
        for (label, study) in [("space", &space), ("time", &time)] {
            println!("  {label}: errors {:?}", study.errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>());
            println!("  {label}: orders {:.3?}", study.orders);
        }
    }
    Ok(())
}
