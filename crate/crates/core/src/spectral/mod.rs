//! `H = −Δ − V` on the lattice: assembly, ground states, semigroups and
//! ground-state expectations.

mod expectation;
mod hamiltonian;
mod model;
mod semigroup;

pub use expectation::{
    expectation_momentum, expectation_momentum_dense, expectation_position, expectation_position_complex,
    finite_beta_expectation, mixed_expectation, momentum_distribution, momentum_multiplier, position_multiplier,
    TrialState,
};
pub use hamiltonian::{multiplier_matrix, Hamiltonian};
pub use model::{GroundState, LatticeModel, UNIQUENESS_THRESHOLD};
pub use semigroup::{
    duhamel_partial_sum, duhamel_remainder_bound, trotter_product, Basis, DuhamelExpansion, SemigroupMethod,
};
