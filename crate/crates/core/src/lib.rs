//! Coherent transport through a one-dimensional quantum-dot chain whose two
//! terminal dots are each tunnel-coupled to both a left and a right lead.
//!
//! The chain may carry PT-symmetric gain/loss (`E_1 = E0 - iγ`,
//! `E_N = E0 + iγ`) and an Aharonov-Bohm flux threading the ring formed by
//! the chain and the leads. The crate provides:
//!
//! - [`model`]: circuit parameterization, chain Hamiltonian, gauge phases and
//!   the PT-symmetry predicate.
//! - [`leads`]: surface Green function of the semi-infinite leads, self-energies
//!   and broadening matrices.
//! - [`negf`]: retarded Green function, Landauer transmission, transmission
//!   amplitude and its phase.
//! - [`molecular`]: molecular-orbital decomposition of the chain and the
//!   decoupled (dark) state classification.
//! - [`analytic`]: closed-form transmission amplitudes for two- and three-dot
//!   chains, used as machine-precision oracles.
//! - [`analysis`]: parameter sweeps and feature extraction (peaks,
//!   antiresonances, phase transitions).
//! - [`config`], [`presets`], [`output`], [`verify`] and [`cli`]: the
//!   command-line front end and its file formats.
//!
//! Energies are measured in units of the lead hopping `t0`.

// `!(a < b)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod config;
pub mod error;
pub mod leads;
pub mod linalg;
pub mod model;
pub mod molecular;
pub mod negf;
pub mod output;
pub mod presets;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use model::{Allocation, ChainSpec, CircuitSpec, CouplingSpec, LeadSpec};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
