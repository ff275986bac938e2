//! Sector propagators at pairs of points with the same hyperbolic distance:
//! the extended propagator is constant, sector 0 alone is not.
//!
//! Takes about a minute in release mode.

use hlobachevsky::spectral::{invariance_scan, Controls, Sector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scan = invariance_scan(1.5, 5, 1.0, 0.5, &Controls::default())?;
    println!("{:>8} {:>8} {:>22} {:>22}", "dx", "y'", "G0", "G_ext");
    for (q, v) in scan.queries.iter().zip(&scan.values) {
        println!("{:8.4} {:8.4} {:22.12} {:22.12}", q.dx, q.yp, v.sector0, v.extended.re);
    }
    println!("spread: extended {:.2e}, sector 0 {:.2e}", scan.spread(Sector::Extended), scan.spread(Sector::Zero));
    Ok(())
}
