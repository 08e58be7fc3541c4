//! Retarded Green function of the open chain and the Landauer transmission.
//!
//! `G^r = [ω + iη − H_c − Σ_L − Σ_R]^{-1}`, `G^a = (G^r)†`, and
//! `T = Tr[Γ_L G^r Γ_R G^a]`. Because each `Γ_α = ρ0 ū_α u_αᵀ` has rank one,
//! the trace collapses to `|τ|²` with `τ = ρ0 Σ_jl v_Lj G_jl conj(v_Rl)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::leads::{lead_dos, SelfEnergySet};
use crate::linalg::{inverse_iteration, norm, ComplexMatrix, LuDecomposition};
use crate::model::{chain_hamiltonian, CircuitSpec, Lead};
use crate::C64;

/// Which side of the amplitude carries the complex conjugate of the bonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeConjugation {
    /// `τ ∝ v_Lj G_jl conj(v_Rl)`.
    #[default]
    RightLead,
    /// `τ ∝ conj(v_Lj) G_jl v_Rl`, the flux-reversed variant. Only used to
    /// probe the verification suite.
    LeftLead,
}

/// How the advanced Green function is formed from the retarded one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdvancedGreen {
    /// `G^a = (G^r)†`.
    #[default]
    Adjoint,
    /// `G^a = (G^r)^{-1}`. Wrong; kept to probe the verification suite.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Conventions {
    pub amplitude: AmplitudeConjugation,
    pub advanced: AdvancedGreen,
}

/// Offset for the symmetric-average limit used when several dark states coincide.
pub const LIMIT_STEP: f64 = 1e-7;

/// Pivot ratio above which the resolvent is treated as exactly singular.
pub const NEAR_SINGULAR_RATIO: f64 = 1e13;

fn factor(m: &ComplexMatrix) -> Result<LuDecomposition> {
    let lu = LuDecomposition::new(m)?;
    if lu.pivot_ratio() > NEAR_SINGULAR_RATIO {
        return Err(Error::SingularMatrix {
            pivot: m.max_abs() / lu.pivot_ratio(),
        });
    }
    Ok(lu)
}

/// `ω + iη − H_c − Σ_L − Σ_R`.
pub fn assemble_inverse_gr(spec: &CircuitSpec, omega: f64) -> Result<ComplexMatrix> {
    let sigma = SelfEnergySet::new(spec, omega)?.total();
    let n = spec.n_dots();
    let mut m = chain_hamiltonian(spec.chain()).scale(C64::new(-1.0, 0.0)).sub(&sigma);
    let z = C64::new(omega, spec.eta());
    for i in 0..n {
        m[(i, i)] += z;
    }
    Ok(m)
}

/// Matrix inverse by LU with partial pivoting.
pub fn invert(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    crate::linalg::invert(m)
}

/// Retarded Green function at one energy.
#[derive(Debug, Clone)]
pub struct GreenFunction {
    pub gr: ComplexMatrix,
    pub omega: f64,
}

impl GreenFunction {
    pub fn new(spec: &CircuitSpec, omega: f64) -> Result<Self> {
        let m = assemble_inverse_gr(spec, omega)?;
        Ok(Self {
            gr: factor(&m)?.inverse(),
            omega,
        })
    }

    pub fn advanced(&self) -> ComplexMatrix {
        self.gr.adjoint()
    }
}

/// Landauer transmission `Tr[Γ_L G^r Γ_R G^a]`.
pub fn transmission(spec: &CircuitSpec, omega: f64) -> Result<f64> {
    transmission_with(spec, omega, Conventions::default())
}

pub fn transmission_with(spec: &CircuitSpec, omega: f64, conventions: Conventions) -> Result<f64> {
    let sigma = SelfEnergySet::new(spec, omega)?;
    let m = assemble_inverse_gr(spec, omega)?;
    let gr = factor(&m)?.inverse();
    let ga = match conventions.advanced {
        AdvancedGreen::Adjoint => gr.adjoint(),
        AdvancedGreen::Inverse => m,
    };
    let product = &(&(&sigma.gamma_l() * &gr) * &sigma.gamma_r()) * &ga;
    Ok(product.trace().re)
}

/// Complex transmission amplitude with `|τ|² = T`.
pub fn transmission_amplitude(spec: &CircuitSpec, omega: f64) -> Result<C64> {
    transmission_amplitude_with(spec, omega, Conventions::default())
}

pub fn transmission_amplitude_with(spec: &CircuitSpec, omega: f64, conventions: Conventions) -> Result<C64> {
    let rho = lead_dos(omega, spec.lead().t0())?;
    let m = assemble_inverse_gr(spec, omega)?;
    let lu = factor(&m)?;
    let n = spec.n_dots();
    if n == 1 {
        let ul = spec.lead_vector(Lead::Left)[0];
        let ur = spec.lead_vector(Lead::Right)[0];
        let g = lu.solve(&[C64::new(1.0, 0.0)])[0];
        let pair = match conventions.amplitude {
            AmplitudeConjugation::RightLead => ul * ur.conj(),
            AmplitudeConjugation::LeftLead => ul.conj() * ur,
        };
        return Ok(pair * g * rho);
    }
    // τ = ρ0 Σ_jl v_Lj G_jl conj(v_Rl) over the terminal dots, with each
    // bond pair entering through its phase difference
    let unit = |k: usize| {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[k] = C64::new(1.0, 0.0);
        e
    };
    let columns = [lu.solve(&unit(0)), lu.solve(&unit(n - 1))];
    let sign = match conventions.amplitude {
        AmplitudeConjugation::RightLead => 1.0,
        AmplitudeConjugation::LeftLead => -1.0,
    };
    let mut tau = C64::new(0.0, 0.0);
    for &(j, mj, pj) in &spec.terminal_bonds(Lead::Left) {
        for (col, &(_, ml, pl)) in spec.terminal_bonds(Lead::Right).iter().enumerate() {
            tau += C64::from_polar(mj * ml, sign * (pj - pl)) * columns[col][j];
        }
    }
    Ok(tau * rho)
}

/// Folds a phase difference into `(−π, π]`.
pub fn fold_phase(d: f64) -> f64 {
    let mut r = d % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Unwraps a sequence of principal-value phases.
pub fn unwrap_phases(principal: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(principal.len());
    let mut prev: Option<(f64, f64)> = None;
    for &p in principal {
        let value = match prev {
            None => p,
            Some((raw, unwrapped)) => unwrapped + fold_phase(p - raw),
        };
        out.push(value);
        prev = Some((p, value));
    }
    out
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpec("energy grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Unwrapped phase of `τ` along an increasing energy grid.
pub fn phase_series(spec: &CircuitSpec, omega_grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(omega_grid)?;
    let principal = omega_grid
        .iter()
        .map(|&w| evaluate(spec, w).map(|p| p.tau.arg()))
        .collect::<Result<Vec<_>>>()?;
    Ok(unwrap_phases(&principal))
}

/// Transmission and amplitude at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportPoint {
    pub omega: f64,
    pub transmission: f64,
    pub tau: C64,
    /// Set when the resolvent is singular at `omega` and the values are the
    /// limit approached from neighboring energies.
    pub limit: bool,
}

fn evaluate_exact(spec: &CircuitSpec, omega: f64) -> Result<(f64, C64)> {
    Ok((transmission(spec, omega)?, transmission_amplitude(spec, omega)?))
}

/// Relative size of the overlaps that must vanish for a singularity to be removable.
const DARK_OVERLAP: f64 = 1e-8;

/// Limit of `τ` at an energy where the resolvent is singular because a
/// state with no weight on the lead vectors sits exactly at `omega`.
///
/// With `x`, `y` the right and left null vectors of `M = [G^r]^{-1}`, the
/// right lead vector lies in the range of `M` and the left one is orthogonal
/// to `x`, so `leftᵀ z` is the same for every solution of `M z = right`.
/// One such solution comes from the bordered matrix `M + conj(y) xᴴ`.
pub fn singular_limit_amplitude(spec: &CircuitSpec, omega: f64) -> Result<C64> {
    let rho = lead_dos(omega, spec.lead().t0())?;
    let m = assemble_inverse_gr(spec, omega)?;
    let zero = C64::new(0.0, 0.0);
    let x = inverse_iteration(&m, zero, &[])?;
    let y = inverse_iteration(&m.transpose(), zero, &[])?;
    let left = spec.lead_vector(Lead::Left);
    let right: Vec<C64> = spec.lead_vector(Lead::Right).iter().map(|z| z.conj()).collect();
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let cutoff = DARK_OVERLAP * (norm(&left) + norm(&right)).max(f64::MIN_POSITIVE);
    let (lx, yr) = (dot(&left, &x).norm(), dot(&y, &right).norm());
    if lx > cutoff || yr > cutoff {
        return Err(Error::SingularMatrix { pivot: 0.0 });
    }
    let xbar: Vec<C64> = x.iter().map(|z| z.conj()).collect();
    let ybar: Vec<C64> = y.iter().map(|z| z.conj()).collect();
    let bordered = m.add(&ComplexMatrix::outer(&ybar, &xbar).scale(C64::new(m.max_abs(), 0.0)));
    match factor(&bordered) {
        Ok(lu) => Ok(dot(&left, &lu.solve(&right)) * rho),
        Err(Error::SingularMatrix { .. }) => {
            // several dark states at one energy: fall back to the symmetric average
            let h = LIMIT_STEP * spec.lead().t0();
            Ok((transmission_amplitude(spec, omega - h)? + transmission_amplitude(spec, omega + h)?) * 0.5)
        }
        Err(e) => Err(e),
    }
}

/// Transmission and amplitude at `omega`.
///
/// A dark molecular state whose level sits exactly at `omega` makes the
/// resolvent singular while `T` and `τ` stay finite. Such points return the
/// limit with `T = |τ|²`; a pole that is not removable stays an error.
pub fn evaluate(spec: &CircuitSpec, omega: f64) -> Result<TransportPoint> {
    match evaluate_exact(spec, omega) {
        Ok((transmission, tau)) => Ok(TransportPoint {
            omega,
            transmission,
            tau,
            limit: false,
        }),
        Err(Error::SingularMatrix { .. }) => {
            let tau = singular_limit_amplitude(spec, omega)?;
            Ok(TransportPoint {
                omega,
                transmission: tau.norm_sqr(),
                tau,
                limit: true,
            })
        }
        Err(e) => Err(e),
    }
}
