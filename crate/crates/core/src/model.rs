//! Circuit parameterization: the dot chain, the leads, the four chain-lead
//! tunneling amplitudes and the flux that threads the ring they form.


use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::C64;

/// Tolerance used by [`check_pt_symmetry`].
pub const PT_TOLERANCE: f64 = 1e-12;

/// On-site energies `E_l` and nearest-neighbor hoppings `t_l` of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    onsite: Vec<C64>,
    hoppings: Vec<C64>,
}

impl ChainSpec {
    pub fn new(onsite: Vec<C64>, hoppings: Vec<C64>) -> Result<Self> {
        if onsite.is_empty() {
            return Err(Error::InvalidSpec("chain needs at least one dot".into()));
        }
        if hoppings.len() + 1 != onsite.len() {
            return Err(Error::InvalidSpec(format!(
                "{} dots need {} hoppings, got {}",
                onsite.len(),
                onsite.len() - 1,
                hoppings.len()
            )));
        }
        if onsite.iter().chain(&hoppings).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidSpec("chain parameters must be finite".into()));
        }
        Ok(Self { onsite, hoppings })
    }

    /// Chain with one on-site energy and one real hopping throughout.
    pub fn uniform(n: usize, e0: f64, tc: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("chain needs at least one dot".into()));
        }
        Self::new(vec![C64::new(e0, 0.0); n], vec![C64::new(tc, 0.0); n - 1])
    }

    pub fn n_dots(&self) -> usize {
        self.onsite.len()
    }

    pub fn onsite(&self) -> &[C64] {
        &self.onsite
    }

    pub fn hoppings(&self) -> &[C64] {
        &self.hoppings
    }

    /// Chain left after deleting both terminal dots, if any dots remain.
    pub fn inner(&self) -> Option<ChainSpec> {
        let n = self.n_dots();
        if n < 3 {
            return None;
        }
        Some(ChainSpec {
            onsite: self.onsite[1..n - 1].to_vec(),
            hoppings: self.hoppings[1..n - 2].to_vec(),
        })
    }
}

/// Semi-infinite uniform leads with hopping `t0` (the energy unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadSpec {
    t0: f64,
}

impl LeadSpec {
    pub fn new(t0: f64) -> Result<Self> {
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(Error::InvalidSpec(format!("lead hopping must be positive, got {t0}")));
        }
        Ok(Self { t0 })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
}

impl Default for LeadSpec {
    fn default() -> Self {
        Self { t0: 1.0 }
    }
}

/// How the flux phase is distributed over the four chain-lead bonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Allocation {
    /// `(+φ/4, −φ/4, −φ/4, +φ/4)` on `(v_L1, v_LN, v_R1, v_RN)`.
    #[default]
    Symmetric,
    /// `(+φ/2, 0, 0, +φ/2)`: the symmetric gauge after rotating every dot
    /// operator by `e^{−iφ/4}`.
    LeftShifted,
}

impl Allocation {
    /// Bond phases in the order `(L1, LN, R1, RN)`.
    pub fn phases(self, flux: f64) -> [f64; 4] {
        let q = flux / 4.0;
        let symmetric = [q, -q, -q, q];
        match self {
            Allocation::Symmetric => symmetric,
            // global dot rotation adds the same phase to every bond
            Allocation::LeftShifted => symmetric.map(|p| p + q),
        }
    }
}

/// Chain-lead tunneling magnitudes and the threading flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    v0: f64,
    magnitudes: [f64; 4],
    flux: f64,
    allocation: Allocation,
}

impl CouplingSpec {
    /// All four bonds with magnitude `v0`.
    pub fn uniform(v0: f64, flux: f64, allocation: Allocation) -> Result<Self> {
        Self::with_magnitudes(v0, [v0; 4], flux, allocation)
    }

    /// Explicit magnitudes `(|v_L1|, |v_LN|, |v_R1|, |v_RN|)`.
    pub fn with_magnitudes(v0: f64, magnitudes: [f64; 4], flux: f64, allocation: Allocation) -> Result<Self> {
        if !(v0.is_finite() && v0 >= 0.0) {
            return Err(Error::InvalidSpec(format!("v0 must be non-negative, got {v0}")));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidSpec("coupling magnitudes must be non-negative".into()));
        }
        if !flux.is_finite() {
            return Err(Error::InvalidSpec("flux must be finite".into()));
        }
        Ok(Self {
            v0,
            magnitudes,
            flux,
            allocation,
        })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn magnitudes(&self) -> [f64; 4] {
        self.magnitudes
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    pub fn allocation(&self) -> Allocation {
        self.allocation
    }

    pub fn with_flux(mut self, flux: f64) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_allocation(mut self, allocation: Allocation) -> Self {
        self.allocation = allocation;
        self
    }

    /// True when all four magnitudes equal `v0`.
    pub fn is_uniform(&self) -> bool {
        self.magnitudes.iter().all(|&m| m == self.v0)
    }
}

/// The four complex amplitudes `(v_L1, v_LN, v_R1, v_RN)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondAmplitudes {
    pub l1: C64,
    pub ln: C64,
    pub r1: C64,
    pub rn: C64,
}

impl BondAmplitudes {
    pub fn as_array(&self) -> [C64; 4] {
        [self.l1, self.ln, self.r1, self.rn]
    }
}

/// Lead label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lead {
    Left,
    Right,
}

/// Full parameterization of the two-terminal circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    chain: ChainSpec,
    lead: LeadSpec,
    coupling: CouplingSpec,
    eta: f64,
}

impl CircuitSpec {
    pub fn new(chain: ChainSpec, lead: LeadSpec, coupling: CouplingSpec) -> Self {
        Self {
            chain,
            lead,
            coupling,
            eta: 0.0,
        }
    }

    /// Adds a positive infinitesimal `iη` to the energy in the resolvent.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidSpec(format!("eta must be non-negative, got {eta}")));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn with_coupling(mut self, coupling: CouplingSpec) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn lead(&self) -> &LeadSpec {
        &self.lead
    }

    pub fn coupling(&self) -> &CouplingSpec {
        &self.coupling
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n_dots(&self) -> usize {
        self.chain.n_dots()
    }

    /// `(dot index, magnitude, phase)` of the two bonds of `lead`, first dot first.
    pub fn terminal_bonds(&self, lead: Lead) -> [(usize, f64, f64); 2] {
        let n = self.n_dots();
        let p = self.coupling.allocation.phases(self.coupling.flux);
        let m = self.coupling.magnitudes;
        match lead {
            Lead::Left => [(0, m[0], p[0]), (n - 1, m[1], p[1])],
            Lead::Right => [(0, m[2], p[2]), (n - 1, m[3], p[3])],
        }
    }

    /// N-vector carrying lead `lead`'s bond amplitudes at the terminal dots.
    /// For a single dot both bonds of the lead attach to it and add.
    pub fn lead_vector(&self, lead: Lead) -> Vec<C64> {
        let n = self.n_dots();
        let v = coupling_phases(&self.coupling);
        let (first, last) = match lead {
            Lead::Left => (v.l1, v.ln),
            Lead::Right => (v.r1, v.rn),
        };
        let mut u = vec![C64::new(0.0, 0.0); n];
        u[0] += first;
        u[n - 1] += last;
        u
    }
}

/// PT-symmetric chain: `E_1 = E0 − iγ`, `E_N = E0 + iγ`, uniform hopping `tc`
/// and an optional real detuning on the center dot of an odd chain.
pub fn make_pt_chain(n: usize, e0: f64, tc: f64, gamma: f64, center_delta: f64) -> Result<ChainSpec> {
    if n < 2 {
        return Err(Error::InvalidSize { n });
    }
    if center_delta != 0.0 && n.is_multiple_of(2) {
        return Err(Error::InvalidDetuning { n });
    }
    let mut onsite = vec![C64::new(e0, 0.0); n];
    onsite[0] = C64::new(e0, -gamma);
    onsite[n - 1] = C64::new(e0, gamma);
    if n % 2 == 1 {
        onsite[n / 2] += center_delta;
    }
    ChainSpec::new(onsite, vec![C64::new(tc, 0.0); n - 1])
}

/// Complex bond amplitudes implied by magnitudes, flux and gauge allocation.
pub fn coupling_phases(coupling: &CouplingSpec) -> BondAmplitudes {
    let p = coupling.allocation.phases(coupling.flux);
    let m = coupling.magnitudes;
    let amp = |k: usize| {
        if p[k] == 0.0 {
            C64::new(m[k], 0.0)
        } else {
            C64::from_polar(m[k], p[k])
        }
    };
    BondAmplitudes {
        l1: amp(0),
        ln: amp(1),
        r1: amp(2),
        rn: amp(3),
    }
}

/// Single-particle matrix of the isolated chain: `E_l` on the diagonal,
/// `t_l` below it and `conj(t_l)` above it.
pub fn chain_hamiltonian(chain: &ChainSpec) -> ComplexMatrix {
    let n = chain.n_dots();
    let mut h = ComplexMatrix::from_diagonal(chain.onsite());
    for (l, &t) in chain.hoppings().iter().enumerate() {
        h[(l + 1, l)] = t;
        h[(l, l + 1)] = t.conj();
    }
    debug_assert_eq!(h.dim(), n);
    h
}

/// Combined parity/time-reversal invariance: equal hoppings,
/// `E_l = conj(E_{N+1−l})`, `v_L1 = conj(v_RN)` and `v_R1 = conj(v_LN)`.
pub fn check_pt_symmetry(spec: &CircuitSpec) -> bool {
    let chain = spec.chain();
    let hops = chain.hoppings();
    if let Some(first) = hops.first() {
        if hops.iter().any(|t| (t - first).norm() > PT_TOLERANCE) {
            return false;
        }
    }
    let e = chain.onsite();
    let n = e.len();
    if (0..n).any(|l| (e[l] - e[n - 1 - l].conj()).norm() > PT_TOLERANCE) {
        return false;
    }
    let v = coupling_phases(spec.coupling());
    (v.l1 - v.rn.conj()).norm() <= PT_TOLERANCE && (v.r1 - v.ln.conj()).norm() <= PT_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn circuit(chain: ChainSpec, flux: f64) -> CircuitSpec {
        CircuitSpec::new(
            chain,
            LeadSpec::default(),
            CouplingSpec::uniform(1.0, flux, Allocation::Symmetric).unwrap(),
        )
    }

    #[test]
    fn pt_dimer_onsite_and_hopping() {
        let ch = make_pt_chain(2, 0.0, 0.5, 0.3, 0.0).unwrap();
        assert_eq!(ch.onsite(), &[c(0.0, -0.3), c(0.0, 0.3)]);
        assert_eq!(ch.hoppings(), &[c(0.5, 0.0)]);
    }

    #[test]
    fn detuned_trimer() {
        let ch = make_pt_chain(3, 0.0, 0.5, 0.0, 0.5).unwrap();
        assert_eq!(ch.onsite(), &[c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        assert_eq!(ch.hoppings(), &[c(0.5, 0.0), c(0.5, 0.0)]);
    }

    #[test]
    fn uniform_tetramer() {
        let ch = make_pt_chain(4, 0.0, 0.5, 0.0, 0.0).unwrap();
        assert!(ch.onsite().iter().all(|&e| e == c(0.0, 0.0)));
        assert_eq!(ch.hoppings().len(), 3);
    }

    #[test]
    fn pt_chain_rejects_bad_input() {
        assert!(matches!(make_pt_chain(1, 0.0, 0.5, 0.0, 0.0), Err(Error::InvalidSize { n: 1 })));
        assert!(matches!(make_pt_chain(4, 0.0, 0.5, 0.0, 0.5), Err(Error::InvalidDetuning { n: 4 })));
    }

    #[test]
    fn chain_spec_validation() {
        assert!(ChainSpec::new(vec![c(0.0, 0.0); 3], vec![c(0.5, 0.0)]).is_err());
        assert!(ChainSpec::new(vec![c(f64::NAN, 0.0)], vec![]).is_err());
        assert!(ChainSpec::new(vec![], vec![]).is_err());
        assert!(LeadSpec::new(0.0).is_err());
        assert!(CouplingSpec::uniform(-1.0, 0.0, Allocation::Symmetric).is_err());
    }

    #[test]
    fn zero_flux_amplitudes_are_real() {
        let v = coupling_phases(&CouplingSpec::uniform(1.0, 0.0, Allocation::Symmetric).unwrap());
        assert_eq!(v.as_array(), [c(1.0, 0.0); 4]);
    }

    #[test]
    fn two_pi_symmetric_gauge() {
        let v = coupling_phases(&CouplingSpec::uniform(1.0, 2.0 * PI, Allocation::Symmetric).unwrap());
        let expect = [
            C64::from_polar(1.0, PI / 2.0),
            C64::from_polar(1.0, -PI / 2.0),
            C64::from_polar(1.0, -PI / 2.0),
            C64::from_polar(1.0, PI / 2.0),
        ];
        for (a, b) in v.as_array().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn two_pi_left_shifted_gauge() {
        let v = coupling_phases(&CouplingSpec::uniform(1.0, 2.0 * PI, Allocation::LeftShifted).unwrap());
        let expect = [c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        for (a, b) in v.as_array().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn hamiltonian_entries() {
        let h = chain_hamiltonian(&make_pt_chain(2, 0.0, 0.5, 0.0, 0.0).unwrap());
        assert_eq!(h, ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.0)]]));
        let h = chain_hamiltonian(&make_pt_chain(2, 0.0, 0.5, 0.3, 0.0).unwrap());
        assert_eq!(h, ComplexMatrix::from_rows(&[vec![c(0.0, -0.3), c(0.5, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.3)]]));
        let h = chain_hamiltonian(&make_pt_chain(3, 0.0, 0.5, 0.0, 0.5).unwrap());
        assert_eq!(h[(1, 1)], c(0.5, 0.0));
        assert_eq!(h[(0, 2)], c(0.0, 0.0));
        assert_eq!(h[(2, 1)], c(0.5, 0.0));
    }

    #[test]
    fn complex_hopping_goes_conjugated_above_diagonal() {
        let ch = ChainSpec::new(vec![c(0.0, 0.0); 2], vec![c(0.3, 0.4)]).unwrap();
        let h = chain_hamiltonian(&ch);
        assert_eq!(h[(1, 0)], c(0.3, 0.4));
        assert_eq!(h[(0, 1)], c(0.3, -0.4));
        assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn pt_predicate_examples() {
        assert!(check_pt_symmetry(&circuit(make_pt_chain(2, 0.0, 0.5, 0.3, 0.0).unwrap(), 0.0)));
        let broken = ChainSpec::new(vec![c(0.0, -0.3), c(0.0, -0.3)], vec![c(0.5, 0.0)]).unwrap();
        assert!(!check_pt_symmetry(&circuit(broken, 0.0)));
        assert!(check_pt_symmetry(&circuit(make_pt_chain(3, 0.0, 0.5, 0.3, 0.5).unwrap(), 0.0)));
        // the bond condition fails for φ = π in the symmetric gauge
        assert!(!check_pt_symmetry(&circuit(make_pt_chain(2, 0.0, 0.5, 0.3, 0.0).unwrap(), PI)));
        let uneven = ChainSpec::new(vec![c(0.0, 0.0); 3], vec![c(0.5, 0.0), c(0.6, 0.0)]).unwrap();
        assert!(!check_pt_symmetry(&circuit(uneven, 0.0)));
    }

    #[test]
    fn single_dot_lead_vector_sums_both_bonds() {
        let ch = ChainSpec::new(vec![c(0.0, 0.0)], vec![]).unwrap();
        let spec = circuit(ch, 0.0);
        assert_eq!(spec.lead_vector(Lead::Left), vec![c(2.0, 0.0)]);
    }

    #[test]
    fn inner_chain_drops_terminals() {
        let ch = make_pt_chain(5, 0.0, 0.5, 0.2, 0.3).unwrap();
        let inner = ch.inner().unwrap();
        assert_eq!(inner.n_dots(), 3);
        assert_eq!(inner.onsite()[1], c(0.3, 0.0));
        assert_eq!(inner.hoppings().len(), 2);
        assert!(make_pt_chain(2, 0.0, 0.5, 0.0, 0.0).unwrap().inner().is_none());
    }

    proptest! {
        #[test]
        fn loop_phase_equals_flux(flux in -20.0f64..20.0) {
            let p = Allocation::Symmetric.phases(flux);
            let loop_phase = p[0] + p[3] - p[1] - p[2];
            prop_assert!((loop_phase - flux).abs() <= 1e-12 * flux.abs().max(1.0));
            let q = Allocation::LeftShifted.phases(flux);
            prop_assert!(((q[0] + q[3] - q[1] - q[2]) - flux).abs() <= 1e-12 * flux.abs().max(1.0));
        }

        #[test]
        fn hermitian_without_gain_loss(n in 2usize..12, e0 in -1.0f64..1.0, tc in 0.01f64..2.0) {
            let h = chain_hamiltonian(&make_pt_chain(n, e0, tc, 0.0, 0.0).unwrap());
            prop_assert!(h.is_hermitian(0.0));
        }

        #[test]
        fn pt_condition_independent_of_gamma(n in 2usize..10, gamma in -3.0f64..3.0, tc in 0.01f64..2.0) {
            let spec = circuit(make_pt_chain(n, 0.2, tc, gamma, 0.0).unwrap(), 0.0);
            prop_assert!(check_pt_symmetry(&spec));
        }
    }
}
