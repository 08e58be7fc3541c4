//! Regenerate one preset panel and write its spectrum as CSV to stdout.

use qdchain::analysis::sweep;
use qdchain::output::write_spectrum_csv;
use qdchain::presets::FigureId;

fn main() -> qdchain::Result<()> {
    let id: FigureId = std::env::args().nth(1).unwrap_or_else(|| "fig2a".into()).parse()?;
    let mut config = id.config();
    config.sweep.omega_points = 9;
    let series = sweep(&config.template(), &config.sweep.gammas, &config.phis(), &config.grid()?)?;
    write_spectrum_csv(std::io::stdout().lock(), &series)?;
    Ok(())
}
