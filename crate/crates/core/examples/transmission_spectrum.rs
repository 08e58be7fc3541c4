//! Transmission of a PT-symmetric dimer for a few gain/loss strengths.

use qdchain::analysis::{omega_grid, SpectrumSeries, SweepTemplate};

fn main() -> qdchain::Result<()> {
    let template = SweepTemplate {
        n_dots: 2,
        ..Default::default()
    };
    let grid = omega_grid(-1.5, 1.5, 13)?;
    print!("{:>7}", "omega");
    let gammas = [0.0, 0.1, 0.3];
    for g in gammas {
        print!("  T(g={g:.1})");
    }
    println!();
    let series: Vec<SpectrumSeries> = gammas
        .iter()
        .map(|&g| SpectrumSeries::compute(template.circuit(g, 0.0)?, g, 0.0, &grid))
        .collect::<qdchain::Result<_>>()?;
    for (i, w) in grid.iter().enumerate() {
        print!("{w:>7.3}");
        for s in &series {
            print!("  {:>9.5}", s.samples[i].transmission);
        }
        println!();
    }
    Ok(())
}
