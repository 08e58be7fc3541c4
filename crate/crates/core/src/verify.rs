//! Self-check suite run by `qdchain verify`.
//!
//! Each check reports the worst observed deviation against its tolerance.
//! The engine conventions are injectable so the suite can be shown to reject
//! the wrong amplitude conjugation and the wrong advanced Green function.

use std::f64::consts::PI;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::analysis::{find_antiresonances, omega_grid, SpectrumSeries, SweepTemplate, ANTIRESONANCE_THRESHOLD};
use crate::analytic::{tau_n2, tau_n3, ClosedFormParams};
use crate::error::{Error, Result};
use crate::model::{make_pt_chain, Allocation, ChainSpec, CircuitSpec, CouplingSpec, LeadSpec};
use crate::molecular::{classify_decoupled, eigendecompose_chain, uniform_chain_eigensystem};
use crate::negf::{evaluate, transmission_amplitude_with, transmission_with, Conventions};
use crate::presets::FigureId;
use crate::C64;

const GAMMAS: [f64; 4] = [0.0, 0.1, 0.3, 0.5];
const PHIS: [f64; 4] = [0.0, PI / 2.0, PI, 2.0 * PI];
const ORACLE_POINTS: usize = 401;
const PRESET_POINTS: usize = 801;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: &'static str, tolerance: f64, worst: f64) -> Self {
        Self {
            name,
            tolerance,
            worst,
            passed: worst < tolerance,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<22} worst={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance
        )
    }
}

/// Engine entry points under a given set of conventions. Exactly singular
/// points fall back to the default engine's limit.
#[derive(Debug, Clone, Copy, Default)]
struct Engine {
    conventions: Conventions,
}

impl Engine {
    fn amplitude(&self, spec: &CircuitSpec, omega: f64) -> Result<C64> {
        match transmission_amplitude_with(spec, omega, self.conventions) {
            Err(Error::SingularMatrix { .. }) => Ok(evaluate(spec, omega)?.tau),
            other => other,
        }
    }

    fn transmission(&self, spec: &CircuitSpec, omega: f64) -> Result<f64> {
        match transmission_with(spec, omega, self.conventions) {
            Err(Error::SingularMatrix { .. }) => Ok(evaluate(spec, omega)?.transmission),
            other => other,
        }
    }
}

fn max_over<T, F>(items: &[T], f: F) -> Result<f64>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    let values = items.par_iter().map(f).collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

fn oracle(engine: Engine, n: usize, e2s: &[f64]) -> Result<f64> {
    let grid = omega_grid(-1.99, 1.99, ORACLE_POINTS)?;
    let mut cases = Vec::new();
    for &e2 in e2s {
        for gamma in GAMMAS {
            for phi in PHIS {
                cases.push(ClosedFormParams {
                    gamma,
                    phi,
                    e2,
                    ..Default::default()
                });
            }
        }
    }
    max_over(&cases, |p| {
        let spec = p.circuit(n)?;
        let mut worst = 0.0f64;
        for &w in &grid {
            let exact = if n == 2 { tau_n2(p, w)? } else { tau_n3(p, w)? };
            worst = worst.max((engine.amplitude(&spec, w)? - exact).norm());
        }
        Ok(worst)
    })
}

/// Random PT chains with random flux and energy, seeded for reproducibility.
pub fn random_specs(count: usize, seed: u64) -> Result<Vec<(CircuitSpec, f64)>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let gamma = rng.gen_range(0.0..=0.5);
            let phi = rng.gen_range(0.0..=2.0 * PI);
            let omega = rng.gen_range(-1.95..1.95);
            let spec = CircuitSpec::new(
                make_pt_chain(n, 0.0, 0.5, gamma, 0.0)?,
                LeadSpec::default(),
                CouplingSpec::uniform(1.0, phi, Allocation::Symmetric)?,
            );
            Ok((spec, omega))
        })
        .collect()
}

fn trace_identity(engine: Engine) -> Result<f64> {
    let specs = random_specs(100, 2024)?;
    max_over(&specs, |(spec, w)| {
        Ok((engine.transmission(spec, *w)? - engine.amplitude(spec, *w)?.norm_sqr()).abs())
    })
}

fn preset_transmissions(engine: Engine, id: FigureId, allocation: Allocation, gammas: &[f64]) -> Result<Vec<f64>> {
    let config = id.config();
    let template = SweepTemplate {
        allocation,
        ..config.template()
    };
    let grid = omega_grid(config.sweep.omega_min, config.sweep.omega_max, PRESET_POINTS)?;
    let mut out = Vec::new();
    for &g in gammas {
        for phi in config.phis() {
            let spec = template.circuit(g, phi)?;
            let t = grid
                .par_iter()
                .map(|&w| engine.transmission(&spec, w))
                .collect::<Result<Vec<_>>>()?;
            out.extend(t);
        }
    }
    Ok(out)
}

fn gauge(engine: Engine) -> Result<f64> {
    max_over(&FigureId::ALL, |&id| {
        let a = preset_transmissions(engine, id, Allocation::Symmetric, &GAMMAS)?;
        let b = preset_transmissions(engine, id, Allocation::LeftShifted, &GAMMAS)?;
        Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    })
}

/// Largest violation of `0 ≤ T ≤ 1` over the Hermitian (`γ = 0`) presets.
fn unitarity(engine: Engine) -> Result<f64> {
    max_over(&FigureId::ALL, |&id| {
        let t = preset_transmissions(engine, id, Allocation::Symmetric, &[0.0])?;
        Ok(t.iter().map(|&x| (-x).max(x - 1.0).max(0.0)).fold(0.0, f64::max))
    })
}

/// Count of chains N = 2..=8 whose dark-state set differs from the parity rule.
pub fn parity_mismatches() -> Result<usize> {
    let mut bad = 0;
    for n in 2..=8 {
        let expect: Vec<usize> = (1..=n).filter(|m| (n % 2 == 1) == (m % 2 == 0)).collect();
        let complement: Vec<usize> = (1..=n).filter(|m| !expect.contains(m)).collect();
        for (phi, want) in [(0.0, &expect), (2.0 * PI, &complement)] {
            let spec = CircuitSpec::new(
                ChainSpec::uniform(n, 0.0, 0.5)?,
                LeadSpec::default(),
                CouplingSpec::uniform(1.0, phi, Allocation::Symmetric)?,
            );
            if &classify_decoupled(&spec)? != want {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// Worst `T` at the exact zeros of the two- and three-dot chains for `γ > 0`.
fn closed_form_zeros(engine: Engine) -> Result<f64> {
    let cases: [(usize, f64, f64, &[f64]); 4] = [
        (2, 0.0, 0.0, &[-0.5]),
        (2, 0.0, 2.0 * PI, &[0.5]),
        (3, 0.5, 0.0, &[0.0, 0.5]),
        (3, 0.5, 2.0 * PI, &[-0.5, 1.0]),
    ];
    let mut worst = 0.0f64;
    for (n, delta, phi, zeros) in cases {
        for gamma in [0.1, 0.3, 0.5] {
            let spec = SweepTemplate {
                n_dots: n,
                delta,
                ..Default::default()
            }
            .circuit(gamma, phi)?;
            for &w in zeros {
                worst = worst.max(engine.transmission(&spec, w)?);
            }
        }
    }
    Ok(worst)
}

/// Worst distance between expected and refined zeros of the four- and
/// five-dot chains; a missing zero counts as distance 1.
fn refined_zeros() -> Result<f64> {
    let r = 0.5 * 2f64.sqrt();
    let cases: [(usize, f64, Vec<f64>); 4] = [
        (4, 0.0, vec![0.5]),
        (4, 2.0 * PI, vec![-0.5]),
        (5, 0.0, vec![-r, r]),
        (5, 2.0 * PI, vec![0.0]),
    ];
    let grid = omega_grid(-1.99, 1.99, 4001)?;
    let mut jobs = Vec::new();
    for (n, phi, zeros) in &cases {
        for gamma in GAMMAS {
            jobs.push((*n, *phi, gamma, zeros.clone()));
        }
    }
    max_over(&jobs, |(n, phi, gamma, zeros)| {
        let t = SweepTemplate {
            n_dots: *n,
            ..Default::default()
        };
        let s = SpectrumSeries::compute(t.circuit(*gamma, *phi)?, *gamma, *phi, &grid)?;
        let found = find_antiresonances(&s, ANTIRESONANCE_THRESHOLD, true)?;
        Ok(zeros
            .iter()
            .map(|z| found.iter().map(|f| (f.omega - z).abs()).fold(1.0, f64::min))
            .fold(0.0, f64::max))
    })
}

fn eigensolver() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let exact = uniform_chain_eigensystem(n, 0.0, 0.5)?;
        let numeric = eigendecompose_chain(&ChainSpec::uniform(n, 0.0, 0.5)?)?;
        for (a, b) in exact.energies.iter().zip(&numeric.energies) {
            worst = worst.max((a - b).norm());
        }
    }
    let trimer = eigendecompose_chain(&make_pt_chain(3, 0.0, 0.5, 0.0, 0.5)?)?;
    for (e, x) in trimer.energies.iter().zip([-0.5, 0.0, 1.0]) {
        worst = worst.max((e - x).norm());
    }
    let dimer = eigendecompose_chain(&make_pt_chain(2, 0.0, 0.5, 0.3, 0.0)?)?;
    for (e, x) in dimer.energies.iter().zip([-0.4, 0.4]) {
        worst = worst.max((e - x).norm());
    }
    Ok(worst)
}

/// Runs every check with the given engine conventions.
pub fn run_checks(conventions: Conventions) -> Result<Vec<CheckResult>> {
    let engine = Engine { conventions };
    Ok(vec![
        CheckResult::below("oracle-n2", 1e-12, oracle(engine, 2, &[0.0])?),
        CheckResult::below("oracle-n3", 1e-12, oracle(engine, 3, &[0.0, 0.5])?),
        CheckResult::below("trace-identity", 1e-12, trace_identity(engine)?),
        CheckResult::below("gauge-invariance", 1e-12, gauge(engine)?),
        CheckResult::below("unitarity", 1e-12, unitarity(engine)?),
        CheckResult::below("decoupling-parity", 0.5, parity_mismatches()? as f64),
        CheckResult::below("closed-form-zeros", 1e-12, closed_form_zeros(engine)?),
        CheckResult::below("refined-zeros", 1e-6, refined_zeros()?),
        CheckResult::below("eigensolver", 1e-10, eigensolver()?),
    ])
}

pub fn run_all() -> Result<Vec<CheckResult>> {
    run_checks(Conventions::default())
}
