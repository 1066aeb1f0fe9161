//! Largest observed ratios in the interpolation and product inequalities on
//! random bump sums, and how they move when the sample is enriched tenfold.
//!
//! `cargo run --release --example inequality_suite [samples]`

use vdwe::diagnostics::inequalities::{enrichment_study, SampleFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count = std::env::args().nth(1).map_or(Ok(3000), |a| a.parse())?;
    let family = SampleFamily { count, cells: 1024, half_width: 16.0, seed: 11 };
    let study = enrichment_study(&family, 10)?;
    for ((b, e), (_, change)) in study.base.iter().zip(&study.enriched).zip(study.changes()) {
        println!("{:<40} {:>10.5} -> {:>10.5} ({:+.1}%)", b.name, b.max_ratio, e.max_ratio, 100.0 * change);
    }
    println!("stable within 20%: {}", study.stable(0.2));
    Ok(())
}
