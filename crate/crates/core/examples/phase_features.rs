//! Unwrapped transmission phase of the dimer and its sharp/smooth features.

use qdchain::analysis::{detect_phase_features, omega_grid, SpectrumSeries, SweepTemplate};
use qdchain::analysis::{SHARPNESS_RATIO, SHARPNESS_WINDOW};

fn main() -> qdchain::Result<()> {
    let template = SweepTemplate {
        n_dots: 2,
        ..Default::default()
    };
    let grid = omega_grid(-1.99, 1.99, 4001)?;
    for gamma in [0.0, 0.1, 0.5] {
        let series = SpectrumSeries::compute(template.circuit(gamma, 0.0)?, gamma, 0.0, &grid)?;
        let phases = series.phases();
        println!(
            "gamma={gamma}: phase runs from {:.3} to {:.3}",
            phases[0],
            phases[phases.len() - 1]
        );
        for f in detect_phase_features(&series, SHARPNESS_WINDOW, SHARPNESS_RATIO) {
            println!("  {:?} at omega={:.4}, jump {:.3}", f.kind, f.omega, f.jump);
        }
    }
    Ok(())
}
