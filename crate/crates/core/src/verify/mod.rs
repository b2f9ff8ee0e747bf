//! Executable correlation inequalities. Every check returns
//! [`VerificationReport`]s whose margins are slacks: positive means the
//! inequality holds with room to spare.

mod cone_suite;
mod controls;
mod family;
mod inequalities;
mod oracles;
mod report;

pub use cone_suite::{
    random_ergodic, random_reducible, unique_positive_ground, verify_cone_theory, verify_positivity_structure,
};
pub use controls::{non_even_function, verify_negative_controls};
pub use family::ModelFamily;
pub use inequalities::{
    covariances, family_series, first_inequality_on, second_inequality_on, verify_first_inequality,
    verify_momentum_distribution, verify_momentum_monotone, verify_momentum_suite, verify_monotone_in_n,
    verify_potential_order, verify_second_inequality, FamilySeries,
};
pub use oracles::{
    verify_duhamel_commuting, verify_finite_beta, verify_momentum_representations, verify_oracles, verify_trotter_ratio,
};
pub use report::{all_passed, digest, Instance, VerificationReport};

/// Tolerances shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// One-sided slack for nonstrict inequalities and equalities.
    pub inequality: f64,
    /// Margin a strict inequality must clear, per unit `‖f̂‖₁`.
    pub strict_margin: f64,
    /// Allowed distance between the last family member and the limit model.
    pub conv_tol: f64,
    /// Entrywise slack of the matrix-exponential checks.
    pub cone: f64,
    /// Agreement of the finite-`β` trial state with the ground state.
    pub finite_beta: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            inequality: 1e-10,
            strict_margin: 1e-8,
            conv_tol: 1e-4,
            cone: 1e-9,
            finite_beta: 1e-8,
        }
    }
}
