//! Self-dual cone calculus and executable Griffiths-type correlation
//! inequalities for Schrödinger operators `H = −Δ − V` on a periodic lattice.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line runner and report serialization live in the `griffiths` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cone;
pub mod doubled;
pub mod error;
pub mod lanczos;
pub mod lattice;
pub mod linalg;
pub mod rng;
pub mod spectral;
pub mod verify;

pub use cone::{ConeDescriptor, ConeElement, ConeKind, ConeMap};
pub use doubled::{CoordinateChange, DoubledModel};
pub use error::{Error, Result};
pub use lattice::{Grid, Kinetic, Potential, PotentialKind, TestFunction, TestFunctionClass};
pub use spectral::{GroundState, Hamiltonian, LatticeModel, SemigroupMethod, TrialState};
pub use verify::VerificationReport;
