//! The same flux split two ways between the lead bonds gives the same spectrum.

use std::f64::consts::PI;

use qdchain::analysis::{omega_grid, SpectrumSeries, SweepTemplate};
use qdchain::Allocation;

fn main() -> qdchain::Result<()> {
    let grid = omega_grid(-1.99, 1.99, 801)?;
    for n in [2, 3, 5] {
        let a = SweepTemplate {
            n_dots: n,
            ..Default::default()
        };
        let b = SweepTemplate {
            allocation: Allocation::LeftShifted,
            ..a.clone()
        };
        let phi = 0.7 * PI;
        let sa = SpectrumSeries::compute(a.circuit(0.3, phi)?, 0.3, phi, &grid)?;
        let sb = SpectrumSeries::compute(b.circuit(0.3, phi)?, 0.3, phi, &grid)?;
        let worst = sa
            .samples
            .iter()
            .zip(&sb.samples)
            .map(|(x, y)| (x.transmission - y.transmission).abs())
            .fold(0.0, f64::max);
        println!("N={n}: max |T_symmetric - T_shifted| = {worst:.2e}");
    }
    Ok(())
}
