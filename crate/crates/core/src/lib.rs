//! Graph perturbations, exact spectra, automorphism groups, exact MaxCut and
//! a statevector QAOA simulator. `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod autgroup;
pub mod error;
pub mod graph;
pub mod maxcut;
pub mod metrics;
pub mod poly;
pub mod qaoa;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::Graph;
pub use num_bigint::BigUint;
