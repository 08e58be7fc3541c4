//! Molecular-orbital picture of the isolated chain: eigenstates, their
//! couplings to the leads and the states that decouple from both leads.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, inverse_iteration, ComplexMatrix};
use crate::model::{chain_hamiltonian, coupling_phases, ChainSpec, CircuitSpec};
use crate::C64;

/// A state is dark when both couplings fall below this multiple of `v0`.
pub const DECOUPLING_TOLERANCE: f64 = 1e-10;

/// Eigenvalue gap below which two states are flagged as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

const TIE_TOLERANCE: f64 = 1e-12;

/// Lead couplings `w_αm` of each molecular state.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularCouplings {
    pub left: Vec<C64>,
    pub right: Vec<C64>,
}

/// Eigen-decomposition of the chain Hamiltonian.
///
/// States are labeled `1..=N` in ascending order of the real part of their
/// energy; column `m − 1` of `eta` is the eigenvector of state `m`.
#[derive(Debug, Clone)]
pub struct MolecularDecomposition {
    pub energies: Vec<C64>,
    pub eta: ComplexMatrix,
    pub degenerate: bool,
    pub couplings: Option<MolecularCouplings>,
}

impl MolecularDecomposition {
    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    /// Attaches the lead couplings for `spec`.
    pub fn with_couplings(mut self, spec: &CircuitSpec) -> Result<Self> {
        self.couplings = Some(molecular_couplings(spec, &self)?);
        Ok(self)
    }

    /// Largest `|H η_m − e_m η_m|` over all states.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (m, &e) in self.energies.iter().enumerate() {
            let v = self.eta.column(m);
            let hv = h.mul_vec(&v);
            for (a, b) in hv.iter().zip(&v) {
                worst = worst.max((a - e * b).norm());
            }
        }
        worst
    }
}

fn ascending(a: &C64, b: &C64) -> std::cmp::Ordering {
    if (a.re - b.re).abs() <= TIE_TOLERANCE {
        a.im.total_cmp(&b.im)
    } else {
        a.re.total_cmp(&b.re)
    }
}

/// Sorts eigenvalues by real part, ties broken by imaginary part.
pub fn sort_energies(values: &mut [C64]) {
    values.sort_by(ascending);
}

/// Closed-form eigensystem of the uniform chain (`E_l = E0`, `t_l = tc`):
/// `e_m = E0 − 2tc cos(mπ/(N+1))` and
/// `η[l][m] = √(2/(N+1)) sin((N+1−l)(N+1−m)π/(N+1))`.
pub fn uniform_chain_eigensystem(n: usize, e0: f64, tc: f64) -> Result<MolecularDecomposition> {
    if n == 0 {
        return Err(Error::InvalidSpec("chain needs at least one dot".into()));
    }
    if !(tc > 0.0) {
        return Err(Error::InvalidSpec(format!("hopping must be positive, got {tc}")));
    }
    let np1 = (n + 1) as f64;
    let energies = (1..=n)
        .map(|m| C64::new(e0 - 2.0 * tc * (m as f64 * PI / np1).cos(), 0.0))
        .collect();
    let norm = (2.0 / np1).sqrt();
    let mut eta = ComplexMatrix::zeros(n);
    for l in 1..=n {
        for m in 1..=n {
            let arg = ((n + 1 - l) * (n + 1 - m)) as f64 * PI / np1;
            eta[(l - 1, m - 1)] = C64::new(norm * arg.sin(), 0.0);
        }
    }
    Ok(MolecularDecomposition {
        energies,
        eta,
        degenerate: false,
        couplings: None,
    })
}

fn fix_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let rot = first.conj() / first.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// Numerical eigen-decomposition of a general (possibly non-Hermitian) chain.
///
/// Eigenvectors have unit norm and their first non-negligible component is
/// rotated onto the positive real axis.
pub fn eigendecompose_matrix(h: &ComplexMatrix) -> Result<MolecularDecomposition> {
    let n = h.dim();
    let mut energies = eigenvalues(h)?;
    sort_energies(&mut energies);

    let mut eta = ComplexMatrix::zeros(n);
    let mut degenerate = false;
    let mut cluster: Vec<Vec<C64>> = Vec::new();
    for m in 0..n {
        if m > 0 && (energies[m] - energies[m - 1]).norm() < DEGENERACY_GAP {
            degenerate = true;
        } else {
            cluster.clear();
        }
        let mut v = inverse_iteration(h, energies[m], &cluster)?;
        fix_phase(&mut v);
        for (l, z) in v.iter().enumerate() {
            eta[(l, m)] = *z;
        }
        cluster.push(v);
    }
    Ok(MolecularDecomposition {
        energies,
        eta,
        degenerate,
        couplings: None,
    })
}

pub fn eigendecompose_chain(chain: &ChainSpec) -> Result<MolecularDecomposition> {
    eigendecompose_matrix(&chain_hamiltonian(chain))
}

/// `w_αm = v_α1 conj(η[1][m]) + v_αN conj(η[N][m])` using the spec's actual
/// bond phases.
pub fn molecular_couplings(spec: &CircuitSpec, decomp: &MolecularDecomposition) -> Result<MolecularCouplings> {
    if !spec.coupling().is_uniform() {
        return Err(Error::UnsupportedCouplingPattern);
    }
    let n = spec.n_dots();
    if decomp.n_states() != n {
        return Err(Error::InvalidSpec(format!(
            "decomposition has {} states but the chain has {n} dots",
            decomp.n_states()
        )));
    }
    let v = coupling_phases(spec.coupling());
    let w = |first: C64, last: C64| -> Vec<C64> {
        (0..n)
            .map(|m| first * decomp.eta[(0, m)].conj() + last * decomp.eta[(n - 1, m)].conj())
            .collect()
    };
    Ok(MolecularCouplings {
        left: w(v.l1, v.ln),
        right: w(v.r1, v.rn),
    })
}

/// Labels (1-based, ascending) of the states coupled to neither lead.
pub fn classify_decoupled(spec: &CircuitSpec) -> Result<Vec<usize>> {
    let decomp = eigendecompose_chain(spec.chain())?;
    let w = molecular_couplings(spec, &decomp)?;
    let cutoff = DECOUPLING_TOLERANCE * spec.coupling().v0();
    Ok((0..decomp.n_states())
        .filter(|&m| w.left[m].norm().max(w.right[m].norm()) < cutoff)
        .map(|m| m + 1)
        .collect())
}

/// Ascending eigenvalues of the chain without its two terminal dots.
pub fn subchain_eigenvalues(chain: &ChainSpec) -> Result<Vec<C64>> {
    let inner = chain.inner().ok_or(Error::NoInnerChain { n: chain.n_dots() })?;
    let mut ev = eigenvalues(&chain_hamiltonian(&inner))?;
    sort_energies(&mut ev);
    Ok(ev)
}
