//! CSV and report writers.

use std::io::Write;

use crate::analysis::{AnalysisReport, SpectrumSeries};
use crate::error::Result;

pub const CSV_HEADER: &str = "gamma,phi,omega,T,re_tau,im_tau,phase";
pub const REPORT_HEADER: &str = "kind,omega,value,nearest_level,distance";

/// 17 significant digits.
fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rounds to 6 decimals and prints the shortest representation, without
/// negative zero.
pub fn short(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:?}")
}

/// Long-format spectrum table, one row per `(γ, φ, ω)` in input order.
pub fn write_spectrum_csv<W: Write>(mut out: W, series: &[SpectrumSeries]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in series {
        let (g, p) = (exact(s.gamma), exact(s.phi));
        for x in &s.samples {
            writeln!(
                out,
                "{g},{p},{},{},{},{},{}",
                exact(x.omega),
                exact(x.transmission),
                exact(x.tau.re),
                exact(x.tau.im),
                exact(x.phase)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Feature report: a comment line per series followed by its features in
/// ascending energy.
pub fn write_report<W: Write>(mut out: W, reports: &[AnalysisReport]) -> Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        let s = &r.settings;
        writeln!(
            out,
            "# gamma={},phi={},threshold={:e},prominence={},window={},ratio={}",
            short(r.gamma),
            short(r.phi),
            s.antiresonance_threshold,
            s.peak_prominence,
            s.sharpness_window,
            s.sharpness_ratio
        )?;
        for line in r.lines() {
            let (level, distance) = match line.nearest {
                Some(m) => (short(m.level), format!("{:.3e}", m.distance)),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{:.6e},{level},{distance}",
                line.kind,
                short(line.omega),
                line.value
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
