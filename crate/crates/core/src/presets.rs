//! Parameter sets behind each figure panel.
//!
//! All panels use `E0 = 0`, `tc = 0.5`, `v0 = t0 = 1`,
//! `γ ∈ {0, 0.1, 0.3, 0.5}` and 4001 energies on `[−1.99, 1.99]`.
//! Fig. 2(b) follows the φ = 2π reading; `fig2b-alt` is the `tc = 1.0`,
//! φ = 0 reading of the same panel.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::config::{Angle, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig2bAlt,
    Fig2c,
    Fig2d,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5a,
    Fig5b,
    Fig5c,
    Fig5d,
}

impl FigureId {
    pub const ALL: [FigureId; 17] = [
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2bAlt,
        FigureId::Fig2c,
        FigureId::Fig2d,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
        FigureId::Fig3d,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig4c,
        FigureId::Fig4d,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig5c,
        FigureId::Fig5d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig2bAlt => "fig2b-alt",
            FigureId::Fig2c => "fig2c",
            FigureId::Fig2d => "fig2d",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig3c => "fig3c",
            FigureId::Fig3d => "fig3d",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig4c => "fig4c",
            FigureId::Fig4d => "fig4d",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig5c => "fig5c",
            FigureId::Fig5d => "fig5d",
        }
    }

    /// Phase panels; the rest plot transmission.
    pub fn is_phase(self) -> bool {
        matches!(self, FigureId::Fig5a | FigureId::Fig5b | FigureId::Fig5c | FigureId::Fig5d)
    }

    /// `(N, center detuning, φ, tc)`.
    fn parameters(self) -> (usize, f64, f64, f64) {
        use FigureId::*;
        let two_pi = 2.0 * PI;
        match self {
            Fig2a => (2, 0.0, 0.0, 0.5),
            Fig2b => (2, 0.0, two_pi, 0.5),
            Fig2bAlt => (2, 0.0, 0.0, 1.0),
            Fig2c => (2, 0.0, PI, 0.5),
            Fig2d => (2, 0.0, two_pi, 0.5),
            Fig3a => (3, 0.0, 0.0, 0.5),
            Fig3b => (3, 0.0, two_pi, 0.5),
            Fig3c => (3, 0.5, 0.0, 0.5),
            Fig3d => (3, 0.5, two_pi, 0.5),
            Fig4a => (4, 0.0, 0.0, 0.5),
            Fig4b => (4, 0.0, two_pi, 0.5),
            Fig4c => (5, 0.0, 0.0, 0.5),
            Fig4d => (5, 0.0, two_pi, 0.5),
            Fig5a => (2, 0.0, 0.0, 0.5),
            Fig5b => (3, 0.5, 0.0, 0.5),
            Fig5c => (4, 0.0, 0.0, 0.5),
            Fig5d => (5, 0.0, 0.0, 0.5),
        }
    }

    pub fn config(self) -> RunConfig {
        let (n, delta, phi, tc) = self.parameters();
        let mut c = RunConfig::default();
        c.chain.n_dots = n;
        c.chain.delta = delta;
        c.chain.tc = tc;
        c.sweep.phis = vec![Angle(phi)];
        c
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| {
                let known: Vec<&str> = FigureId::ALL.iter().map(|id| id.name()).collect();
                Error::Config(format!("unknown figure {s:?}; expected one of {}", known.join(", ")))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
            id.config().validate().unwrap();
        }
        assert!("fig9z".parse::<FigureId>().is_err());
    }

    #[test]
    fn panel_parameters() {
        let c = FigureId::Fig3c.config();
        assert_eq!((c.chain.n_dots, c.chain.delta, c.phis()), (3, 0.5, vec![0.0]));
        assert_eq!(c.sweep.gammas, vec![0.0, 0.1, 0.3, 0.5]);
        let c = FigureId::Fig4b.config();
        assert_eq!((c.chain.n_dots, c.phis()), (4, vec![2.0 * PI]));
        assert!(FigureId::Fig5a.is_phase() && !FigureId::Fig2a.is_phase());
        assert_eq!(FigureId::Fig2bAlt.config().chain.tc, 1.0);
    }
}
