//! Which molecular states of a uniform chain drop out of transport at zero
//! and 2π flux.

use std::f64::consts::PI;

use qdchain::molecular::classify_decoupled;
use qdchain::{Allocation, ChainSpec, CircuitSpec, CouplingSpec, LeadSpec};

fn main() -> qdchain::Result<()> {
    for n in 2..=6 {
        for (label, flux) in [("0", 0.0), ("2pi", 2.0 * PI)] {
            let spec = CircuitSpec::new(
                ChainSpec::uniform(n, 0.0, 0.5)?,
                LeadSpec::default(),
                CouplingSpec::uniform(1.0, flux, Allocation::Symmetric)?,
            );
            println!("N={n} phi={label:<3} decoupled states {:?}", classify_decoupled(&spec)?);
        }
    }
    Ok(())
}
