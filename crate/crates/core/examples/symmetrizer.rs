//! Assembles the flux symbol in the `(pi, u, s)` variables, including at
//! vacuum, and shows that the diagonal symmetrizer makes it symmetric with
//! speeds below the scheme's bound.
//!
//! `cargo run --release --example symmetrizer`

use vdwe::checks::symmetry_study;
use vdwe::symsys::{assemble_symbol, local_speed_bound, Formulation, SymmetrizedState};
use vdwe::thermo::GasParameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasParameters::with_gamma(0.5, 3.0)?;
    let xi = [0.6, -0.8];
    for pi in [0.0, 0.3, 2.0] {
        let state = SymmetrizedState { pi, velocity: vec![0.2, -0.1], entropy: 0.4 };
        let symbol = assemble_symbol(&xi, &state, &gas)?;
        let speed = state.velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bound = local_speed_bound(pi, speed, state.entropy, &gas, Formulation::General { theta: 1.0 });
        println!("pi = {pi}: asymmetry {:.1e}, eigenvalues {:?}", symbol.asymmetry(), symbol.eigenvalues());
        println!("         spectral radius {:.5} <= bound {:.5}", symbol.spectral_radius(), bound);
    }

    let study = symmetry_study(&gas, 2, 10_000, 7)?;
    println!(
        "{} random draws ({} at vacuum): relative asymmetry {:.1e}, classical {:.1e}, speed ratio {:.5}",
        study.draws, study.vacuum_draws, study.symbol, study.classical, study.speed_ratio
    );
    Ok(())
}
