//! Closed-form amplitudes and eigensystems for the two- and three-dot chains.
//!
//! These are independent of the matrix machinery in [`crate::negf`] apart
//! from sharing the lead surface Green function, and serve as oracles for it.

use crate::error::{Error, Result};
use crate::leads::{lead_dos, surface_green};
use crate::linalg::ComplexMatrix;
use crate::model::{make_pt_chain, Allocation, CircuitSpec, CouplingSpec, LeadSpec};
use crate::molecular::MolecularDecomposition;
use crate::C64;

/// Determinants smaller than this (relative to the natural scale of the
/// matrix entries) are treated as an exact removable singularity.
pub const SINGULAR_DETERMINANT: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParams {
    pub e0: f64,
    pub tc: f64,
    pub gamma: f64,
    /// Level of the center dot of the trimer.
    pub e2: f64,
    pub phi: f64,
    pub v0: f64,
    pub t0: f64,
}

impl Default for ClosedFormParams {
    fn default() -> Self {
        Self {
            e0: 0.0,
            tc: 0.5,
            gamma: 0.0,
            e2: 0.0,
            phi: 0.0,
            v0: 1.0,
            t0: 1.0,
        }
    }
}

impl ClosedFormParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tc > 0.0 && self.t0 > 0.0 && self.v0 >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "closed form needs tc > 0, t0 > 0, v0 >= 0 (got tc={}, t0={}, v0={})",
                self.tc, self.t0, self.v0
            )));
        }
        Ok(())
    }

    /// `Γ0 = v0² ρ0`.
    pub fn gamma0(&self, omega: f64) -> Result<f64> {
        Ok(self.v0 * self.v0 * lead_dos(omega, self.t0)?)
    }

    /// Diagonal corner self-energy summed over both leads, `2 v0² g0`.
    pub fn sigma11(&self, omega: f64) -> Result<C64> {
        Ok(surface_green(omega, self.t0)? * (2.0 * self.v0 * self.v0))
    }

    /// Equivalent circuit with `n` dots (2 or 3) in the symmetric gauge.
    pub fn circuit(&self, n: usize) -> Result<CircuitSpec> {
        let chain = match n {
            2 => make_pt_chain(2, self.e0, self.tc, self.gamma, 0.0)?,
            3 => make_pt_chain(3, self.e0, self.tc, self.gamma, self.e2 - self.e0)?,
            _ => return Err(Error::InvalidSize { n }),
        };
        Ok(CircuitSpec::new(
            chain,
            LeadSpec::new(self.t0)?,
            CouplingSpec::uniform(self.v0, self.phi, Allocation::Symmetric)?,
        ))
    }

    /// `dΣ11/dω`.
    pub fn sigma11_derivative(&self, omega: f64) -> Result<C64> {
        lead_dos(omega, self.t0)?;
        let t2 = self.t0 * self.t0;
        let root = (4.0 * t2 - omega * omega).sqrt();
        Ok(C64::new(1.0 / (2.0 * t2), omega / (2.0 * t2 * root)) * (2.0 * self.v0 * self.v0))
    }
}

fn checked_ratio(num: C64, det: C64, scale: f64) -> Result<C64> {
    if det.norm() <= SINGULAR_DETERMINANT * scale {
        return Err(Error::SingularMatrix { pivot: det.norm() });
    }
    Ok(num / det)
}

/// Numerator and determinant with their energy derivatives.
struct Fraction {
    num: C64,
    det: C64,
    dnum: C64,
    ddet: C64,
    scale: f64,
}

impl Fraction {
    /// `num/det`, or `num'/det'` when both vanish at `ω`.
    fn value(&self) -> Result<C64> {
        match checked_ratio(self.num, self.det, self.scale) {
            Err(Error::SingularMatrix { pivot }) => {
                if self.num.norm() > SINGULAR_DETERMINANT * self.scale {
                    return Err(Error::SingularMatrix { pivot });
                }
                checked_ratio(self.dnum, self.ddet, self.scale)
            }
            other => other,
        }
    }
}

/// Determinant of the dimer's inverse Green function,
/// `[(ω−E0)−Σ11]² + γ² − (tc+Σ12)²` with `Σ12 = Σ11 cos(φ/2)`.
pub fn det_n2(p: &ClosedFormParams, omega: f64) -> Result<C64> {
    let s11 = p.sigma11(omega)?;
    let s12 = s11 * (p.phi / 2.0).cos();
    let d = C64::new(omega - p.e0, 0.0) - s11;
    Ok(d * d + p.gamma * p.gamma - (s12 + p.tc).powi(2))
}

/// Dimer amplitude
/// `τ = 2Γ0 [(ω−E0)cos(φ/2) + γ sin(φ/2) + tc] / det`.
///
/// At an energy where numerator and determinant vanish together the limit
/// is returned.
pub fn tau_n2(p: &ClosedFormParams, omega: f64) -> Result<C64> {
    p.validate()?;
    let g0 = 2.0 * p.gamma0(omega)?;
    let (c, s) = ((p.phi / 2.0).cos(), (p.phi / 2.0).sin());
    let s11 = p.sigma11(omega)?;
    let ds11 = p.sigma11_derivative(omega)?;
    let d = C64::new(omega - p.e0, 0.0) - s11;
    let off = s11 * c + p.tc;
    Fraction {
        num: C64::new(g0 * ((omega - p.e0) * c + p.gamma * s + p.tc), 0.0),
        det: det_n2(p, omega)?,
        dnum: C64::new(g0 * c, 0.0),
        ddet: d * (C64::new(1.0, 0.0) - ds11) * 2.0 - off * ds11 * (2.0 * c),
        scale: ((omega - p.e0).abs() + p.tc + p.gamma + s11.norm()).powi(2),
    }
    .value()
}

/// Dimer amplitude at `φ = 2mπ` in the expanded form
/// `2Γ0[(ω−E0)cos mπ + tc] / {(ω−E0)² − tc² + γ² − 2Σ11[(ω−E0) + tc cos mπ]}`.
///
/// `p.phi` is ignored.
pub fn tau_n2_flux2mpi(p: &ClosedFormParams, m: i32, omega: f64) -> Result<C64> {
    p.validate()?;
    let g0 = p.gamma0(omega)?;
    let s11 = p.sigma11(omega)?;
    let c = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let x = omega - p.e0;
    let num = 2.0 * g0 * (x * c + p.tc);
    let det = C64::new(x * x - p.tc * p.tc + p.gamma * p.gamma, 0.0) - s11 * (2.0 * (x + p.tc * c));
    let scale = (x.abs() + p.tc + p.gamma + s11.norm()).powi(2);
    checked_ratio(C64::new(num, 0.0), det, scale)
}

/// Inverse Green function of the trimer, written out entry by entry.
pub fn inverse_green_n3(p: &ClosedFormParams, omega: f64) -> Result<[[C64; 3]; 3]> {
    let s11 = p.sigma11(omega)?;
    let s13 = s11 * (p.phi / 2.0).cos();
    let t = C64::new(-p.tc, 0.0);
    Ok([
        [C64::new(omega - p.e0, p.gamma) - s11, t, -s13],
        [t, C64::new(omega - p.e2, 0.0), t],
        [-s13, t, C64::new(omega - p.e0, -p.gamma) - s11],
    ])
}

/// Cofactor expansion along the first row.
pub fn det3(m: &[[C64; 3]; 3]) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Trimer amplitude
/// `τ = 2Γ0 [(ω−E0)(ω−E2)cos(φ/2) + γ sin(φ/2)(ω−E2) + tc²(1 − cos(φ/2))] / det`.
///
/// At an energy where numerator and determinant vanish together the limit
/// is returned.
pub fn tau_n3(p: &ClosedFormParams, omega: f64) -> Result<C64> {
    p.validate()?;
    let g0 = 2.0 * p.gamma0(omega)?;
    let (c, s) = ((p.phi / 2.0).cos(), (p.phi / 2.0).sin());
    let (x, y) = (omega - p.e0, omega - p.e2);
    let m = inverse_green_n3(p, omega)?;
    let ds11 = p.sigma11_derivative(omega)?;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let dm = [
        [one - ds11, zero, -ds11 * c],
        [zero, one, zero],
        [-ds11 * c, zero, one - ds11],
    ];
    // Jacobi: d det = Σ_i det(M with row i differentiated)
    let ddet = (0..3)
        .map(|i| {
            let mut r = m;
            r[i] = dm[i];
            det3(&r)
        })
        .sum();
    Fraction {
        num: C64::new(g0 * (x * y * c + p.gamma * s * y + p.tc * p.tc * (1.0 - c)), 0.0),
        det: det3(&m),
        dnum: C64::new(g0 * ((x + y) * c + p.gamma * s), 0.0),
        ddet,
        scale: (x.abs() + y.abs() + p.tc + p.gamma + p.sigma11(omega)?.norm()).powi(3),
    }
    .value()
}

/// Trimer amplitude at `φ = 2mπ` in the expanded form
/// `2Γ0[(ω−E0)(ω−E2)cos mπ + 2tc² sin²(mπ/2)] / D` with
/// `D = [(ω−E0)(ω−E2) − 2tc²](ω−E0) + γ²(ω−E2) − 2Σ11[(ω−E0)(ω−E2) − 2tc² sin²(mπ/2)]`.
///
/// The numerator uses `sin²(mπ/2)`, which matches the general-φ form for
/// every integer `m`. `p.phi` is ignored.
pub fn tau_n3_flux2mpi(p: &ClosedFormParams, m: i32, omega: f64) -> Result<C64> {
    p.validate()?;
    let g0 = p.gamma0(omega)?;
    let s11 = p.sigma11(omega)?;
    let odd = m.rem_euclid(2) == 1;
    let c = if odd { -1.0 } else { 1.0 };
    let s2 = if odd { 1.0 } else { 0.0 };
    let (x, y) = (omega - p.e0, omega - p.e2);
    let tc2 = p.tc * p.tc;
    let num = 2.0 * g0 * (x * y * c + 2.0 * tc2 * s2);
    let det = C64::new((x * y - 2.0 * tc2) * x + p.gamma * p.gamma * y, 0.0) - s11 * (2.0 * (x * y - 2.0 * tc2 * s2));
    let scale = (x.abs() + y.abs() + p.tc + p.gamma + s11.norm()).powi(3);
    checked_ratio(C64::new(num, 0.0), det, scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxCase {
    Zero,
    TwoPi,
}

/// Real zeros of the closed-form numerators, ascending and deduplicated.
pub fn antiresonance_roots(p: &ClosedFormParams, n: usize, flux: FluxCase) -> Result<Vec<f64>> {
    let mut roots = match (n, flux) {
        (2, FluxCase::Zero) => vec![p.e0 - p.tc],
        (2, FluxCase::TwoPi) => vec![p.e0 + p.tc],
        (3, FluxCase::Zero) => vec![p.e0, p.e2],
        (3, FluxCase::TwoPi) => {
            let disc = ((p.e0 - p.e2).powi(2) + 8.0 * p.tc * p.tc).sqrt();
            vec![0.5 * (p.e0 + p.e2 - disc), 0.5 * (p.e0 + p.e2 + disc)]
        }
        _ => return Err(Error::InvalidSize { n }),
    };
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    Ok(roots)
}

/// Eigensystem of the trimer with levels `(E0, E0+δ, E0)` and hopping `tc`.
///
/// With `Δ = √(δ² + 8tc²)` the energies are `E0 + (δ−Δ)/2`, `E0`,
/// `E0 + (δ+Δ)/2`; column `m` of `eta` is state `m`.
pub fn detuned_trimer_eigensystem(e0: f64, tc: f64, delta: f64) -> Result<MolecularDecomposition> {
    if !(tc > 0.0) {
        return Err(Error::InvalidSpec(format!("hopping must be positive, got {tc}")));
    }
    let big = (delta * delta + 8.0 * tc * tc).sqrt();
    let norm = 1.0 / (2.0 * big).sqrt();
    let (lo, hi) = ((big - delta).sqrt(), (big + delta).sqrt());
    let states = [
        [2.0 * tc / lo, -lo, 2.0 * tc / lo],
        [big.sqrt(), 0.0, -big.sqrt()],
        [2.0 * tc / hi, hi, 2.0 * tc / hi],
    ];
    let mut eta = ComplexMatrix::zeros(3);
    for (m, state) in states.iter().enumerate() {
        for (l, x) in state.iter().enumerate() {
            eta[(l, m)] = C64::new(norm * x, 0.0);
        }
    }
    Ok(MolecularDecomposition {
        energies: vec![
            C64::new(e0 + 0.5 * (delta - big), 0.0),
            C64::new(e0, 0.0),
            C64::new(e0 + 0.5 * (delta + big), 0.0),
        ],
        eta,
        degenerate: false,
        couplings: None,
    })
}

/// Eigensystem of the PT dimer `E_{1,2} = E0 ∓ iγ` in its unbroken phase
/// `γ < tc`: `e = E0 ∓ tc cos θ` with `sin θ = γ/tc`, and states
/// `(1, −e^{−iθ})/√2`, `(1, e^{iθ})/√2`.
pub fn pt_dimer_eigensystem(e0: f64, tc: f64, gamma: f64) -> Result<MolecularDecomposition> {
    if !(tc > 0.0 && gamma.abs() < tc) {
        return Err(Error::InvalidSpec(format!(
            "PT dimer is only diagonalizable with real levels for |γ| < tc (got γ={gamma}, tc={tc})"
        )));
    }
    let theta = (gamma / tc).asin();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let eta = ComplexMatrix::from_rows(&[
        vec![C64::new(s, 0.0), C64::new(s, 0.0)],
        vec![-C64::from_polar(s, -theta), C64::from_polar(s, theta)],
    ]);
    let split = tc * theta.cos();
    Ok(MolecularDecomposition {
        energies: vec![C64::new(e0 - split, 0.0), C64::new(e0 + split, 0.0)],
        eta,
        degenerate: false,
        couplings: None,
    })
}
