//! Run configuration read from TOML.
//!
//! ```toml
//! [chain]
//! n_dots = 3
//! e0 = 0.0
//! tc = 0.5
//! delta = 0.5
//!
//! [leads]
//! t0 = 1.0
//!
//! [coupling]
//! v0 = 1.0
//! allocation = "symmetric"
//!
//! [sweep]
//! omega_min = -1.99
//! omega_max = 1.99
//! omega_points = 4001
//! gammas = [0.0, 0.1, 0.3, 0.5]
//! phis = [0.0, "2pi"]
//! ```
//!
//! Angles may be numbers (radians) or strings such as `"pi"`, `"2pi"`,
//! `"pi/2"` or `"0.5pi"`. Every key is optional.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{omega_grid, AnalysisSettings, SweepTemplate};
use crate::error::{Error, Result};
use crate::leads::lead_dos;
use crate::model::Allocation;

/// Parses an angle such as `1.3`, `pi`, `-2pi`, `pi/2` or `0.25pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || Error::Config(format!("cannot parse angle {text:?}"));
    let (body, divisor) = match s.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s.clone(), 1.0),
    };
    let value = if let Some(coef) = body.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*');
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        body.parse::<f64>().map_err(|_| bad())?
    };
    let v = value / divisor;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

/// An angle in radians that may be written as a number or an expression in `pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct AngleVisitor;
        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or an angle expression like \"2pi\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Angle, E> {
                Ok(Angle(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Angle, E> {
                parse_angle(v).map(Angle).map_err(E::custom)
            }
        }
        d.deserialize_any(AngleVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSection {
    pub n_dots: usize,
    pub e0: f64,
    pub tc: f64,
    pub delta: f64,
}

impl Default for ChainSection {
    fn default() -> Self {
        Self {
            n_dots: 2,
            e0: 0.0,
            tc: 0.5,
            delta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeadsSection {
    pub t0: f64,
    pub eta: f64,
}

impl Default for LeadsSection {
    fn default() -> Self {
        Self { t0: 1.0, eta: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingSection {
    pub v0: f64,
    /// `(L1, LN, R1, RN)` in units of `v0`.
    pub magnitudes: [f64; 4],
    pub allocation: Allocation,
}

impl Default for CouplingSection {
    fn default() -> Self {
        Self {
            v0: 1.0,
            magnitudes: [1.0; 4],
            allocation: Allocation::Symmetric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub gammas: Vec<f64>,
    pub phis: Vec<Angle>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            omega_min: -1.99,
            omega_max: 1.99,
            omega_points: 4001,
            gammas: vec![0.0, 0.1, 0.3, 0.5],
            phis: vec![Angle(0.0)],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub chain: ChainSection,
    pub leads: LeadsSection,
    pub coupling: CouplingSection,
    pub sweep: SweepSection,
    pub analysis: AnalysisSettings,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn phis(&self) -> Vec<f64> {
        self.sweep.phis.iter().map(|a| a.0).collect()
    }

    /// Checks everything a sweep needs. Band violations are reported as
    /// [`Error::OmegaOutsideBand`], everything else as a configuration error.
    pub fn validate(&self) -> Result<()> {
        let c = &self.chain;
        if c.n_dots < 2 {
            return Err(Error::Config(format!("chain.n_dots must be at least 2, got {}", c.n_dots)));
        }
        if !(c.tc > 0.0 && c.tc.is_finite()) {
            return Err(Error::Config(format!("chain.tc must be positive, got {}", c.tc)));
        }
        if !c.e0.is_finite() || !c.delta.is_finite() {
            return Err(Error::Config("chain.e0 and chain.delta must be finite".into()));
        }
        if c.delta != 0.0 && c.n_dots.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "chain.delta needs an odd number of dots, got {}",
                c.n_dots
            )));
        }
        if !(self.leads.t0 > 0.0 && self.leads.t0.is_finite()) {
            return Err(Error::Config(format!("leads.t0 must be positive, got {}", self.leads.t0)));
        }
        if !(self.leads.eta >= 0.0 && self.leads.eta.is_finite()) {
            return Err(Error::Config(format!("leads.eta must be non-negative, got {}", self.leads.eta)));
        }
        if !(self.coupling.v0 >= 0.0 && self.coupling.v0.is_finite()) {
            return Err(Error::Config(format!("coupling.v0 must be non-negative, got {}", self.coupling.v0)));
        }
        if self.coupling.magnitudes.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(Error::Config("coupling.magnitudes must be non-negative".into()));
        }
        let s = &self.sweep;
        if s.omega_points < 2 {
            return Err(Error::Config(format!("sweep.omega_points must be at least 2, got {}", s.omega_points)));
        }
        if !(s.omega_min < s.omega_max) {
            return Err(Error::Config(format!(
                "sweep.omega_min must be below omega_max ({} >= {})",
                s.omega_min, s.omega_max
            )));
        }
        if s.phis.is_empty() {
            return Err(Error::Config("sweep.phis must not be empty".into()));
        }
        if s.gammas.iter().any(|g| !g.is_finite()) || s.phis.iter().any(|p| !p.0.is_finite()) {
            return Err(Error::Config("sweep.gammas and sweep.phis must be finite".into()));
        }
        let a = &self.analysis;
        if !(a.antiresonance_threshold > 0.0 && a.peak_prominence >= 0.0 && a.sharpness_window > 0.0 && a.sharpness_ratio > 0.0) {
            return Err(Error::Config("analysis thresholds must be positive".into()));
        }
        lead_dos(s.omega_min, self.leads.t0)?;
        lead_dos(s.omega_max, self.leads.t0)?;
        Ok(())
    }

    pub fn template(&self) -> SweepTemplate {
        SweepTemplate {
            n_dots: self.chain.n_dots,
            e0: self.chain.e0,
            tc: self.chain.tc,
            delta: self.chain.delta,
            t0: self.leads.t0,
            v0: self.coupling.v0,
            magnitudes: self.coupling.magnitudes,
            allocation: self.coupling.allocation,
            eta: self.leads.eta,
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        omega_grid(self.sweep.omega_min, self.sweep.omega_max, self.sweep.omega_points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("2π").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_sections() {
        let c = RunConfig::from_toml_str(
            r#"
            [chain]
            n_dots = 3
            delta = 0.5
            [coupling]
            allocation = "left-shifted"
            [sweep]
            omega_points = 11
            phis = [0, "2pi", 1.5]
            [analysis]
            refine = false
            "#,
        )
        .unwrap();
        assert_eq!(c.chain.n_dots, 3);
        assert_eq!(c.coupling.allocation, Allocation::LeftShifted);
        assert_eq!(c.phis(), vec![0.0, 2.0 * PI, 1.5]);
        assert!(!c.analysis.refine);
        assert_eq!(c.grid().unwrap().len(), 11);
        c.validate().unwrap();
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.chain.n_dots = 5;
        c.sweep.phis = vec![Angle(0.0), Angle(2.0 * PI)];
        c.sweep.gammas = vec![0.3];
        c.output.path = Some(PathBuf::from("out.csv"));
        c.analysis.sharpness_window = 0.07;
        let text = c.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        c.sweep.phis.clear();
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = RunConfig::default();
        c.sweep.omega_max = 2.5;
        assert!(matches!(c.validate(), Err(Error::OmegaOutsideBand { .. })));

        let mut c = RunConfig::default();
        c.chain.delta = 0.5;
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        assert!(matches!(RunConfig::from_toml_str("[chain]\nbogus = 1"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::from_toml_str("[sweep]\nphis = [\"x\"]"), Err(Error::Config(_))));
    }
}
