use alloc::vec::Vec;

use super::report::VerificationReport;
use super::Tolerances;
use crate::error::Result;
use crate::lattice::{sample_test_functions, TestFunctionClass};
use crate::linalg::{max_abs, RMatrix};
use crate::spectral::{
    duhamel_partial_sum, expectation_momentum, expectation_momentum_dense, expectation_position,
    finite_beta_expectation, position_multiplier, LatticeModel, SemigroupMethod,
};
#[allow(unused_imports)]
use num_traits::Float;

/// `⟨f(−i∇)⟩` from `|ψ̂|²` against `⟨ψ|F† diag(f) F ψ⟩` with the dense
/// Fourier matrix. Report id `oracle.momentum_representations`.
pub fn verify_momentum_representations(
    model: &LatticeModel,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<VerificationReport> {
    let gs = model.ground_state()?;
    let mut r = VerificationReport::new("oracle.momentum_representations", tol.inequality, digest);
    for (i, f) in sample_test_functions(TestFunctionClass::A, samples, seed, model.grid())?
        .iter()
        .enumerate()
    {
        let fast = expectation_momentum(&gs, f)?;
        let dense = expectation_momentum_dense(&gs, f)?;
        r.record(alloc::format!("f{i} real part"), -(fast - dense.re).abs());
        r.record(alloc::format!("f{i} imaginary part"), -dense.im.abs());
    }
    Ok(r.finish())
}

/// `⟨φ_β|f φ_β⟩` against the eigensolver's `⟨f⟩` for `𝔄_e` samples.
/// Report id `oracle.finite_beta`; the tolerance is `tol.finite_beta`.
///
/// The error decays like `e^{−β(E₁−E₀)}` when the first excited state is
/// even; the note records that rate so a failure can be read against it.
pub fn verify_finite_beta(
    model: &LatticeModel,
    beta: f64,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<VerificationReport> {
    let gs = model.ground_state()?;
    let mut r = VerificationReport::new("oracle.finite_beta", tol.finite_beta, digest);
    for (i, f) in sample_test_functions(TestFunctionClass::AEven, samples, seed, model.grid())?
        .iter()
        .enumerate()
    {
        let exact = expectation_position(&gs, f)?;
        let approx = finite_beta_expectation(model, &position_multiplier(f), beta)?;
        r.record(alloc::format!("f{i} beta={beta}"), -(approx - exact).abs());
    }
    let gap = model.gap();
    r.note(alloc::format!(
        "beta={beta}, gap E1-E0={gap:.6}, e^(-beta*gap)={:.3e}, e^(-2*beta*gap)={:.3e}",
        (-beta * gap).exp(),
        (-2.0 * beta * gap).exp()
    ));
    Ok(r.finish())
}

/// Error of `(e^{−βK/s}e^{βV/s})ˢ` against the eigensolver semigroup for
/// `s, 2s, 4s`: each ratio of successive errors must lie in `[1.5, 2.5]`.
/// Report id `oracle.trotter_ratio` (margin `min(ratio − 1.5, 2.5 − ratio)`).
pub fn verify_trotter_ratio(model: &LatticeModel, beta: f64, steps: usize, digest: &str) -> Result<VerificationReport> {
    let exact = model.semigroup(beta, SemigroupMethod::Eigen)?;
    let err = |s: usize| -> Result<f64> {
        Ok(max_abs(
            &(model.semigroup(beta, SemigroupMethod::Trotter { steps: s })? - &exact),
        ))
    };
    let errors = [err(steps)?, err(2 * steps)?, err(4 * steps)?];
    let mut r = VerificationReport::new("oracle.trotter_ratio", 0.0, digest);
    for t in 0..2 {
        let ratio = errors[t] / errors[t + 1];
        r.record(
            alloc::format!("steps {}->{} ratio={ratio:.4}", steps << t, steps << (t + 1)),
            (ratio - 1.5).min(2.5 - ratio),
        );
    }
    r.note(alloc::format!(
        "errors {:e}, {:e}, {:e}",
        errors[0],
        errors[1],
        errors[2]
    ));
    Ok(r.finish())
}

/// Duhamel terms for commuting `A = H − E₀` and `C = c·e^{−(H−E₀)}`
/// against the closed form `Dₙ(β) = (βC)ⁿ/n! · e^{−βA}`. An error within
/// four times the Richardson quadrature estimate (plus a rounding floor)
/// counts as agreement. Report id `oracle.duhamel_commuting`.
pub fn verify_duhamel_commuting(
    model: &LatticeModel,
    beta: f64,
    order: usize,
    points: usize,
    digest: &str,
) -> Result<VerificationReport> {
    let e0 = model.ground_energy();
    let a = model.apply_spectral(|l| l - e0);
    let c = model.apply_spectral(|l| 0.5 * (-(l - e0)).exp());
    let d = duhamel_partial_sum(&a, &c, beta, order, points)?;
    let mut r = VerificationReport::new("oracle.duhamel_commuting", 0.0, digest);
    let mut factorial = 1.0;
    for (n, term) in d.terms.iter().enumerate() {
        if n > 0 {
            factorial *= n as f64;
        }
        let closed: RMatrix = model.apply_spectral(|l| {
            let cl = 0.5 * (-(l - e0)).exp();
            (beta * cl).powi(n as i32) / factorial * (-beta * (l - e0)).exp()
        });
        let err = max_abs(&(term - &closed));
        let allowed = 4.0 * d.term_errors[n] + 1e-12 * max_abs(&closed).max(1e-300);
        r.record(
            alloc::format!("order {n}: error {err:.3e}, allowed {allowed:.3e}"),
            allowed - err,
        );
    }
    Ok(r.finish())
}

/// All four oracle equivalences with the default parameters.
pub fn verify_oracles(
    model: &LatticeModel,
    beta: f64,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    Ok(alloc::vec![
        verify_momentum_representations(model, 20, seed, tol, digest)?,
        verify_finite_beta(model, beta, 20, seed, tol, digest)?,
        verify_trotter_ratio(model, 0.5, 8, digest)?,
        verify_duhamel_commuting(model, 1.0, 4, 32, digest)?,
    ])
}
