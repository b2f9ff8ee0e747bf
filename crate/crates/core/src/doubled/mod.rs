//! The doubled lattice `(x₁, x₂)`, the half-sum/half-difference coordinates
//! `(X₁, X₂)`, and the identification of doubled vectors with
//! Hilbert–Schmidt matrices whose PSD cone carries the positivity of the
//! extended Hamiltonian `H ⊗ 1 + 1 ⊗ H`.

mod actions;
mod checks;
mod coordinates;

pub use actions::{HadamardAction, KronSumAction, ShiftKind, ShiftSandwichSum};
pub use checks::{
    check_momentum_doubling, check_potential_doubling, extended_semigroup_positivity, momentum_decomposition,
    DoubledModel, ExtendedOperator, Sign, DOUBLING_TOL,
};
pub use coordinates::{apply_kron, extended_operator, CoordinateChange, Side};
