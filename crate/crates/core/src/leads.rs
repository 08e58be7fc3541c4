//! Semi-infinite uniform leads: surface Green function, self-energies and
//! broadening matrices.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{CircuitSpec, Lead};
use crate::C64;

/// Distance from the band edge (in units of `t0`) below which energies are rejected.
pub const BAND_EDGE_MARGIN: f64 = 1e-9;

fn check_band(omega: f64, t0: f64) -> Result<()> {
    if !(omega.is_finite() && omega.abs() <= 2.0 * t0 - BAND_EDGE_MARGIN * t0) {
        return Err(Error::OmegaOutsideBand { omega, t0 });
    }
    Ok(())
}

/// Lead density-of-states factor `ρ0 = √(4t0² − ω²)/t0²`.
pub fn lead_dos(omega: f64, t0: f64) -> Result<f64> {
    check_band(omega, t0)?;
    Ok((4.0 * t0 * t0 - omega * omega).sqrt() / (t0 * t0))
}

/// Retarded Green function of the end site of a semi-infinite chain,
/// `g0 = ω/(2t0²) − iρ0/2`.
pub fn surface_green(omega: f64, t0: f64) -> Result<C64> {
    let rho = lead_dos(omega, t0)?;
    Ok(C64::new(omega / (2.0 * t0 * t0), -0.5 * rho))
}

/// `Σ_α[j][l] = conj(v_αj) · g0 · v_αl` over the terminal dots.
///
/// Entries are built from magnitudes and phase differences, so two bond
/// gauges with the same differences give bit-identical matrices.
pub fn self_energy(spec: &CircuitSpec, omega: f64, lead: Lead) -> Result<ComplexMatrix> {
    let g0 = surface_green(omega, spec.lead().t0())?;
    let n = spec.n_dots();
    if n >= 2 {
        let bonds = spec.terminal_bonds(lead);
        let mut sigma = ComplexMatrix::zeros(n);
        for &(j, mj, pj) in &bonds {
            for &(l, ml, pl) in &bonds {
                sigma[(j, l)] = g0 * C64::from_polar(mj * ml, pl - pj);
            }
        }
        return Ok(sigma);
    }
    let u = spec.lead_vector(lead);
    let ubar: Vec<C64> = u.iter().map(|z| z.conj()).collect();
    Ok(ComplexMatrix::outer(&ubar, &u).scale(g0))
}

/// `Γ = i(Σ − Σ†)`.
pub fn broadening(sigma: &ComplexMatrix) -> ComplexMatrix {
    sigma.sub(&sigma.adjoint()).scale(C64::new(0.0, 1.0))
}

/// Both lead self-energies at one energy.
#[derive(Debug, Clone)]
pub struct SelfEnergySet {
    pub sigma_l: ComplexMatrix,
    pub sigma_r: ComplexMatrix,
    pub omega: f64,
}

impl SelfEnergySet {
    pub fn new(spec: &CircuitSpec, omega: f64) -> Result<Self> {
        Ok(Self {
            sigma_l: self_energy(spec, omega, Lead::Left)?,
            sigma_r: self_energy(spec, omega, Lead::Right)?,
            omega,
        })
    }

    pub fn total(&self) -> ComplexMatrix {
        self.sigma_l.add(&self.sigma_r)
    }

    pub fn gamma_l(&self) -> ComplexMatrix {
        broadening(&self.sigma_l)
    }

    pub fn gamma_r(&self) -> ComplexMatrix {
        broadening(&self.sigma_r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;
    use crate::model::{make_pt_chain, Allocation, CouplingSpec, LeadSpec};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dimer(v0: f64, flux: f64) -> CircuitSpec {
        CircuitSpec::new(
            make_pt_chain(2, 0.0, 0.5, 0.0, 0.0).unwrap(),
            LeadSpec::default(),
            CouplingSpec::uniform(v0, flux, Allocation::Symmetric).unwrap(),
        )
    }

    #[test]
    fn dos_values() {
        assert_eq!(lead_dos(0.0, 1.0).unwrap(), 2.0);
        assert!((lead_dos(1.0, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(lead_dos(2.5, 1.0), Err(Error::OmegaOutsideBand { .. })));
        assert!(lead_dos(2.0, 1.0).is_err());
        assert!(lead_dos(1.99, 1.0).is_ok());
    }

    #[test]
    fn surface_green_values() {
        assert_eq!(surface_green(0.0, 1.0).unwrap(), c(0.0, -1.0));
        let g = surface_green(1.0, 1.0).unwrap();
        assert!((g - c(0.5, -0.866_025_403_784_438_6)).norm() < 1e-15);
        let g = surface_green(-1.0, 1.0).unwrap();
        assert!((g - c(-0.5, -0.866_025_403_784_438_6)).norm() < 1e-15);
    }

    #[test]
    fn dimer_self_energy_at_band_center() {
        let s = self_energy(&dimer(1.0, 0.0), 0.0, Lead::Left).unwrap();
        let expect = ComplexMatrix::from_rows(&[vec![c(0.0, -1.0); 2], vec![c(0.0, -1.0); 2]]);
        assert!(s.max_abs_diff(&expect) < 1e-15);
        assert_eq!(self_energy(&dimer(0.0, 0.0), 0.3, Lead::Right).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn dimer_self_energy_with_two_pi_flux() {
        let s = self_energy(&dimer(1.0, 2.0 * PI), 0.0, Lead::Left).unwrap();
        assert!((s[(0, 1)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn dimer_broadening() {
        let spec = dimer(1.0, 0.0);
        let g = broadening(&self_energy(&spec, 0.0, Lead::Left).unwrap());
        let expect = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0); 2], vec![c(2.0, 0.0); 2]]);
        assert!(g.max_abs_diff(&expect) < 1e-15);
        assert_eq!(broadening(&ComplexMatrix::zeros(3)).max_abs(), 0.0);
    }

    fn random_circuit(n: usize, v: [f64; 4], flux: f64) -> CircuitSpec {
        CircuitSpec::new(
            make_pt_chain(n, 0.0, 0.5, 0.2, 0.0).unwrap(),
            LeadSpec::default(),
            CouplingSpec::with_magnitudes(1.0, v, flux, Allocation::Symmetric).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn broadening_is_rank_one_psd(
            n in 2usize..7,
            omega in -1.99f64..1.99,
            flux in 0.0f64..(4.0 * PI),
            v in prop::array::uniform4(0.0f64..1.5),
        ) {
            let spec = random_circuit(n, v, flux);
            for (lead, (a, b)) in [(Lead::Left, (v[0], v[1])), (Lead::Right, (v[2], v[3]))] {
                let sigma = self_energy(&spec, omega, lead).unwrap();
                let gamma = broadening(&sigma);
                prop_assert!(gamma.is_hermitian(1e-14));
                let mut ev: Vec<f64> = eigenvalues(&gamma).unwrap().iter().map(|z| z.re).collect();
                ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
                prop_assert!(ev[0] >= -1e-14);
                let rho = lead_dos(omega, 1.0).unwrap();
                let top = rho * (a * a + b * b);
                prop_assert!((ev[n - 1] - top).abs() < 1e-12);
                prop_assert!(ev[..n - 1].iter().all(|e| e.abs() < 1e-12));
                // 2x2 minor over the terminal indices vanishes
                let minor = sigma[(0, 0)] * sigma[(n - 1, n - 1)] - sigma[(0, n - 1)] * sigma[(n - 1, 0)];
                prop_assert!(minor.norm() < 1e-14);
            }
        }

        #[test]
        fn dos_is_minus_twice_imag_green(omega in -1.999f64..1.999, t0 in 1.0f64..2.0) {
            let g = surface_green(omega, t0).unwrap();
            prop_assert_eq!(lead_dos(omega, t0).unwrap(), -2.0 * g.im);
            prop_assert!(g.im <= 0.0);
        }
    }
}
