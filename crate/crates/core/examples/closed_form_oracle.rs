//! Compare the matrix NEGF transmission with the closed-form amplitudes.

use std::f64::consts::PI;

use qdchain::analysis::omega_grid;
use qdchain::analytic::{tau_n2, tau_n3, ClosedFormParams};
use qdchain::negf::evaluate;

fn main() -> qdchain::Result<()> {
    let grid = omega_grid(-1.9, 1.9, 381)?;
    for n in [2, 3] {
        for gamma in [0.0, 0.3] {
            for phi in [0.0, PI, 2.0 * PI] {
                let p = ClosedFormParams {
                    gamma,
                    phi,
                    e2: if n == 3 { 0.5 } else { 0.0 },
                    ..Default::default()
                };
                let spec = p.circuit(n)?;
                let mut worst = 0.0f64;
                for &w in &grid {
                    let tau = if n == 2 { tau_n2(&p, w)? } else { tau_n3(&p, w)? };
                    worst = worst.max((evaluate(&spec, w)?.transmission - tau.norm_sqr()).abs());
                }
                println!("N={n} gamma={gamma} phi={:.0}pi  max |dT| = {worst:.2e}", phi / PI);
            }
        }
    }
    Ok(())
}
