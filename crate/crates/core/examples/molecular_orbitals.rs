//! Eigenstates of a few chains and how strongly each couples to the leads.

use qdchain::model::make_pt_chain;
use qdchain::molecular::eigendecompose_chain;
use qdchain::{Allocation, CircuitSpec, CouplingSpec, LeadSpec};

fn main() -> qdchain::Result<()> {
    for (n, gamma, delta) in [(2, 0.3, 0.0), (3, 0.0, 0.5), (4, 0.0, 0.0)] {
        let chain = make_pt_chain(n, 0.0, 0.5, gamma, delta)?;
        let spec = CircuitSpec::new(
            chain.clone(),
            LeadSpec::default(),
            CouplingSpec::uniform(1.0, 0.0, Allocation::Symmetric)?,
        );
        let d = eigendecompose_chain(&chain)?.with_couplings(&spec)?;
        println!("N={n} gamma={gamma} delta={delta}");
        let w = d.couplings.as_ref().expect("couplings attached");
        for m in 0..d.n_states() {
            let e = d.energies[m];
            println!(
                "  E{} = {:>8.5}{:+.5}i  |w_L| = {:.4}  |w_R| = {:.4}",
                m + 1,
                e.re,
                e.im,
                w.left[m].norm(),
                w.right[m].norm()
            );
        }
    }
    Ok(())
}
