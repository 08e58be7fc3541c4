//! Locate transmission zeros and peaks of a four-dot chain and match them
//! to nearby levels.

use std::f64::consts::PI;

use qdchain::analysis::{analyze, correlate_levels, omega_grid, AnalysisSettings, SpectrumSeries, SweepTemplate};

fn main() -> qdchain::Result<()> {
    let template = SweepTemplate {
        n_dots: 4,
        ..Default::default()
    };
    let grid = omega_grid(-1.99, 1.99, 4001)?;
    for (gamma, phi) in [(0.0, 0.0), (0.3, 0.0), (0.3, 2.0 * PI)] {
        let spec = template.circuit(gamma, phi)?;
        let series = SpectrumSeries::compute(spec.clone(), gamma, phi, &grid)?;
        let report = correlate_levels(analyze(&series, &AnalysisSettings::default())?, &spec)?;
        println!("gamma={gamma} phi={:.0}pi", phi / PI);
        for line in report.lines() {
            println!("  {:<14} omega={:>9.6} value={:.3e}", line.kind, line.omega, line.value);
        }
    }
    Ok(())
}
