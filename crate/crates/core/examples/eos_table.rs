//! Tabulates the van der Waals gas along an isentrope and checks the
//! `rho <-> pi` round trip for a few covolumes.
//!
//! `cargo run --release --example eos_table [covolume] [gamma0]`

use vdwe::checks::{density_ceiling, eos_roundtrip_error, linspace};
use vdwe::thermo::{eos_eval, pi_from_state, rho_from_pi, GasParameters, ThermoState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let covolume: f64 = args.next().map_or(Ok(0.5), |a| a.parse())?;
    let gamma0: f64 = args.next().map_or(Ok(3.0), |a| a.parse())?;
    let gas = GasParameters::with_gamma(covolume, gamma0)?;
    println!("gamma0 = {}, nu = {:.4}, b~ = {:.6}", gas.gamma0, gas.nu, gas.scaled_covolume);

    println!("{:>10} {:>12} {:>12} {:>12} {:>10} {:>10}", "rho", "pi", "p", "c", "gamma", "G");
    for rho in linspace(0.0, density_ceiling(&gas), 11).into_iter().skip(1) {
        let state = ThermoState::new(rho, 0.0);
        let r = eos_eval(state, &gas)?;
        let pi = pi_from_state(state, &gas)?;
        let back = rho_from_pi(pi, 0.0, &gas)?;
        assert!((back - rho).abs() <= 1e-12 * rho.max(1e-300));
        println!(
            "{rho:>10.5} {pi:>12.5e} {:>12.5e} {:>12.5e} {:>10.4} {:>10.4}",
            r.pressure, r.sound_speed, r.adiabatic_exponent, r.fundamental_derivative
        );
    }

    let entropies = linspace(-1.0, 1.0, 21);
    for b in [0.0, 0.1, 1.0] {
        let g = GasParameters::with_gamma(b, gamma0)?;
        println!("b = {b}: round-trip error {:.2e}", eos_roundtrip_error(&g, 200, &entropies)?);
    }
    Ok(())
}
