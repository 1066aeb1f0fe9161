//! Finite speed of propagation: data differing only outside a ball agree
//! inside the shrinking cone up to discretisation error, while a difference
//! inside the ball persists under refinement.
//!
//! `cargo run --release --example cone_uniqueness`

use vdwe::checks::cone_study;
use vdwe::io::Config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = Config::default();
    let study = cone_study(&config)?;
    println!("{:>6} {:>14} {:>14}", "N", "outside", "inside");
    for (n, (o, i)) in study.cells.iter().zip(study.outside.iter().zip(&study.inside)) {
        println!("{n:>6} {:>14.4e} {:>14.4e}", o.discrepancy, i.discrepancy);
    }
    println!("refinement orders (outside): {:?}", study.outside_orders());
    println!("finest/coarsest (inside): {:.3}", study.inside_spread());
    Ok(())
}
