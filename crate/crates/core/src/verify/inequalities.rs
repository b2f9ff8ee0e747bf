use alloc::string::String;
use alloc::vec::Vec;

use super::family::ModelFamily;
use super::report::VerificationReport;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::lattice::{sample_test_functions, TestFunction, TestFunctionClass};
use crate::spectral::{
    expectation_momentum, expectation_position, mixed_expectation, momentum_distribution, GroundState, LatticeModel,
};
#[allow(unused_imports)]
use num_traits::Float;

/// Record `value` as a margin for a strict inequality `value > 0`: zero is
/// pushed just below zero so that it fails at tolerance 0.
pub(crate) fn record_strict(report: &mut VerificationReport, label: impl Into<String>, value: f64) {
    report.record(label, if value > 0.0 { value } else { value - f64::MIN_POSITIVE });
}

/// Entries of a computed vector can only be resolved down to
/// `16·ε·√len·scale`; closer to zero their sign is rounding noise.
pub(crate) fn rounding_floor(scale: f64, len: usize) -> f64 {
    16.0 * f64::EPSILON * scale * (len as f64).sqrt()
}

/// Strict positivity of every entry, as far as rounding can resolve it.
/// The report's tolerance is the rounding floor; a note says how many
/// entries clear it, and the report fails only for entries below `−floor`.
pub(crate) fn positivity_report(check_id: &str, entries: Vec<(String, f64)>, digest: &str) -> VerificationReport {
    let scale = entries.iter().fold(0.0f64, |a, e| a.max(e.1.abs()));
    let floor = rounding_floor(scale, entries.len());
    let mut r = VerificationReport::new(check_id, floor, digest);
    let resolved = entries.iter().filter(|e| e.1 > floor).count();
    let total = entries.len();
    for (label, v) in entries {
        record_strict(&mut r, label, v);
    }
    r.note(alloc::format!(
        "{resolved} of {total} entries exceed the rounding floor {floor:.3e}"
    ));
    r.finish()
}

fn require_class(f: &TestFunction, class: TestFunctionClass) -> Result<()> {
    match f.class_violation(class) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// `⟨f⟩ ≥ 0` and `⟨f(−i∇)⟩ ≥ 0` for every `f ∈ 𝔄` in `samples`, and both
/// exceed `strict_margin · ‖f̂‖₁` unless `f = 0`.
///
/// Functions outside `𝔄` are skipped with a note. Report ids:
/// `first_inequality.position`, `.momentum`, `.strict`.
pub fn first_inequality_on(
    model: &LatticeModel,
    samples: &[TestFunction],
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let gs = model.ground_state()?;
    let mut pos = VerificationReport::new("first_inequality.position", tol.inequality, digest);
    let mut mom = VerificationReport::new("first_inequality.momentum", tol.inequality, digest);
    let mut strict = VerificationReport::new("first_inequality.strict", 0.0, digest);
    for (i, f) in samples.iter().enumerate() {
        if let Some(e) = f.class_violation(TestFunctionClass::A) {
            let note = alloc::format!("sample {i} skipped: {e}");
            pos.note(note.clone());
            mom.note(note.clone());
            strict.note(note);
            continue;
        }
        let a = expectation_position(&gs, f)?;
        let b = expectation_momentum(&gs, f)?;
        pos.record(alloc::format!("f{i}"), a);
        mom.record(alloc::format!("f{i}"), b);
        if f.is_zero() {
            pos.note(alloc::format!("sample {i} is f = 0: <f> = {a:e}"));
            continue;
        }
        let floor = tol.strict_margin * f.l1_norm();
        record_strict(&mut strict, alloc::format!("f{i} position"), a - floor);
        record_strict(&mut strict, alloc::format!("f{i} momentum"), b - floor);
    }
    Ok(alloc::vec![pos.finish(), mom.finish(), strict.finish()])
}

/// [`first_inequality_on`] over `sample_size` seeded members of `𝔄`.
pub fn verify_first_inequality(
    model: &LatticeModel,
    sample_size: usize,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let samples = sample_test_functions(TestFunctionClass::A, sample_size, seed, model.grid())?;
    first_inequality_on(model, &samples, tol, digest)
}

fn real_product(f: &TestFunction, g: &TestFunction) -> Vec<f64> {
    f.realized.iter().zip(&g.realized).map(|(a, b)| (a * b).re).collect()
}

/// The three covariances of a pair in `𝔄_e`:
/// `(⟨fg⟩ − ⟨f⟩⟨g⟩, ⟨f(−i∇)g(−i∇)⟩ − ⟨f(−i∇)⟩⟨g(−i∇)⟩,
/// ⟨f(−i∇)g⟩ − ⟨f(−i∇)⟩⟨g⟩)` and the imaginary part of the mixed term.
pub fn covariances(gs: &GroundState, f: &TestFunction, g: &TestFunction) -> Result<([f64; 3], f64)> {
    require_class(f, TestFunctionClass::AEven)?;
    require_class(g, TestFunctionClass::AEven)?;
    let fg: f64 = real_product(f, g)
        .iter()
        .zip(&gs.vector)
        .map(|(v, psi)| v * psi * psi)
        .sum();
    let pos = fg - expectation_position(gs, f)? * expectation_position(gs, g)?;
    let fg_hat: f64 = real_product(f, g)
        .iter()
        .zip(&gs.psi_hat)
        .map(|(v, ph)| v * ph * ph)
        .sum();
    let mom = fg_hat - expectation_momentum(gs, f)? * expectation_momentum(gs, g)?;
    let mixed = mixed_expectation(gs, f, g)?;
    let cross = mixed.re - expectation_momentum(gs, f)? * expectation_position(gs, g)?;
    Ok(([pos, mom, cross], mixed.im))
}

/// Covariance signs over explicit pairs; any member outside `𝔄_e` is an
/// error. Report ids: `second_inequality.position` (≥ 0),
/// `.momentum` (≥ 0), `.mixed` (≤ 0, margin is the negated covariance;
/// the imaginary residue of the mixed term is recorded against the same
/// tolerance).
pub fn second_inequality_on(
    model: &LatticeModel,
    pairs: &[(TestFunction, TestFunction)],
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let gs = model.ground_state()?;
    let mut pos = VerificationReport::new("second_inequality.position", tol.inequality, digest);
    let mut mom = VerificationReport::new("second_inequality.momentum", tol.inequality, digest);
    let mut mixed = VerificationReport::new("second_inequality.mixed", tol.inequality, digest);
    for (i, (f, g)) in pairs.iter().enumerate() {
        let ([a, b, c], im) = covariances(&gs, f, g)?;
        pos.record(alloc::format!("pair{i}"), a);
        mom.record(alloc::format!("pair{i}"), b);
        mixed.record(alloc::format!("pair{i}"), -c);
        mixed.record(alloc::format!("pair{i} imaginary residue"), -im.abs());
    }
    Ok(alloc::vec![pos.finish(), mom.finish(), mixed.finish()])
}

/// [`second_inequality_on`] over `pairs` seeded pairs from `𝔄_e`.
pub fn verify_second_inequality(
    model: &LatticeModel,
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let fs = sample_test_functions(TestFunctionClass::AEven, pairs, seed, model.grid())?;
    let gs = sample_test_functions(TestFunctionClass::AEven, pairs, seed ^ 0x9e37_79b9, model.grid())?;
    let list: Vec<_> = fs.into_iter().zip(gs).collect();
    second_inequality_on(model, &list, tol, digest)
}

/// Ground-state expectations along a family: `(n, ⟨f⟩ₙ, ⟨f(−i∇)⟩ₙ)` per
/// test function, plus the limit model's pair.
pub struct FamilySeries {
    pub cutoffs: Vec<u32>,
    /// `position[i][t]` is `⟨fᵢ⟩` at cutoff `cutoffs[t]`.
    pub position: Vec<Vec<f64>>,
    pub momentum: Vec<Vec<f64>>,
    pub limit_position: Vec<f64>,
    pub limit_momentum: Vec<f64>,
    pub rho_hat: Vec<Vec<f64>>,
}

/// Evaluate `fs` on every member of `family` and on its limit model.
pub fn family_series(family: &ModelFamily, fs: &[TestFunction]) -> Result<FamilySeries> {
    for f in fs {
        require_class(f, TestFunctionClass::AEven)?;
    }
    let models = family.models()?;
    let mut position = alloc::vec![Vec::new(); fs.len()];
    let mut momentum = alloc::vec![Vec::new(); fs.len()];
    let mut rho_hat = Vec::new();
    let mut cutoffs = Vec::new();
    for (n, m) in &models {
        let gs = m.ground_state()?;
        for (i, f) in fs.iter().enumerate() {
            position[i].push(expectation_position(&gs, f)?);
            momentum[i].push(expectation_momentum(&gs, f)?);
        }
        rho_hat.push(momentum_distribution(&gs)?);
        cutoffs.push(*n);
    }
    let lim = family.limit_model()?.ground_state()?;
    let mut limit_position = Vec::new();
    let mut limit_momentum = Vec::new();
    for f in fs {
        limit_position.push(expectation_position(&lim, f)?);
        limit_momentum.push(expectation_momentum(&lim, f)?);
    }
    Ok(FamilySeries {
        cutoffs,
        position,
        momentum,
        limit_position,
        limit_momentum,
        rho_hat,
    })
}

/// `⟨f⟩ₙ` nondecreasing and `⟨f(−i∇)⟩ₙ` nonincreasing in `n`, and the last
/// member within `conv_tol` of the limit model.
///
/// The limit model uses the uncut transform on the same grid, so the
/// convergence part certifies proximity at `n_hi` rather than the limit
/// itself. Report ids: `monotone_in_n.position`, `.momentum`, `.limit`.
pub fn verify_monotone_in_n(
    family: &ModelFamily,
    fs: &[TestFunction],
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    if family.cutoffs().count() < 3 {
        return Err(Error::Family("monotonicity needs at least three cutoffs".into()));
    }
    let s = family_series(family, fs)?;
    let mut pos = VerificationReport::new("monotone_in_n.position", tol.inequality, digest);
    let mut mom = VerificationReport::new("monotone_in_n.momentum", tol.inequality, digest);
    let mut lim = VerificationReport::new("monotone_in_n.limit", tol.conv_tol, digest);
    for i in 0..fs.len() {
        let (p, m) = (&s.position[i], &s.momentum[i]);
        for t in 1..p.len() {
            let (a, b) = (s.cutoffs[t - 1], s.cutoffs[t]);
            let scale = p[t].abs().max(p[t - 1].abs()).max(1.0);
            pos.record(alloc::format!("f{i} n={a}->{b}"), (p[t] - p[t - 1]) / scale);
            let scale = m[t].abs().max(m[t - 1].abs()).max(1.0);
            mom.record(alloc::format!("f{i} n={a}->{b}"), (m[t - 1] - m[t]) / scale);
        }
        let last = p.len() - 1;
        pos.record(
            alloc::format!("f{i} n={}->limit", s.cutoffs[last]),
            s.limit_position[i] - p[last],
        );
        mom.record(
            alloc::format!("f{i} n={}->limit", s.cutoffs[last]),
            m[last] - s.limit_momentum[i],
        );
        lim.record(alloc::format!("f{i} position"), -(p[last] - s.limit_position[i]).abs());
        lim.record(alloc::format!("f{i} momentum"), -(m[last] - s.limit_momentum[i]).abs());
    }
    lim.note(alloc::format!(
        "limit model: uncut transform restricted to the grid; distance at n = {} certified within {:e}",
        family.n_hi,
        tol.conv_tol
    ));
    Ok(alloc::vec![pos.finish(), mom.finish(), lim.finish()])
}

/// Orderings implied by `V⁽¹⁾ ⪰ V⁽²⁾`: `⟨f⟩⁽¹⁾ ≥ ⟨f⟩⁽²⁾`,
/// `⟨f(−i∇)⟩⁽¹⁾ ≤ ⟨f(−i∇)⟩⁽²⁾` for `f ∈ fs`, and `ρ̂⁽¹⁾ ≥ ρ̂⁽²⁾` at
/// every node. Errors with [`Error::NotComparable`] unless the transforms
/// are ordered. Report ids: `potential_order.position`, `.momentum`,
/// `.momentum_distribution`.
pub fn verify_potential_order(
    upper: &LatticeModel,
    lower: &LatticeModel,
    fs: &[TestFunction],
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    if let Some(index) = upper
        .hamiltonian
        .potential
        .first_order_violation(&lower.hamiltonian.potential)?
    {
        return Err(Error::NotComparable { index });
    }
    for f in fs {
        require_class(f, TestFunctionClass::AEven)?;
    }
    let g1 = upper.ground_state()?;
    let g2 = lower.ground_state()?;
    let mut pos = VerificationReport::new("potential_order.position", tol.inequality, digest);
    let mut mom = VerificationReport::new("potential_order.momentum", tol.inequality, digest);
    let mut rho = VerificationReport::new("potential_order.momentum_distribution", tol.inequality, digest);
    for (i, f) in fs.iter().enumerate() {
        pos.record(
            alloc::format!("f{i}"),
            expectation_position(&g1, f)? - expectation_position(&g2, f)?,
        );
        mom.record(
            alloc::format!("f{i}"),
            expectation_momentum(&g2, f)? - expectation_momentum(&g1, f)?,
        );
    }
    let (r1, r2) = (momentum_distribution(&g1)?, momentum_distribution(&g2)?);
    for k in 0..r1.len() {
        rho.record(alloc::format!("p{k}"), r1[k] - r2[k]);
    }
    Ok(alloc::vec![pos.finish(), mom.finish(), rho.finish()])
}

/// Properties of `ρ̂` for one model: positivity at every node, the value
/// `(2π)^{−d/2}` at 0, the strict maximum at 0, and
/// `(2π)^{d/2} ρ̂(p) ρ̂(p′) ≤ ½ρ̂(p − p′) + ½ρ̂(p + p′)` over all node pairs.
/// Report ids: `momentum_distribution.positive`, `.normalization`,
/// `.maximum`, `.convolution`. Positivity is resolved down to the rounding
/// floor of `ρ̂`; the `.positive` note counts the nodes that clear it.
pub fn verify_momentum_distribution(
    model: &LatticeModel,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let gs = model.ground_state()?;
    let grid = *model.grid();
    let rho = momentum_distribution(&gs)?;
    let c = grid.continuum_factor();
    let origin = grid.origin();
    let mut norm = VerificationReport::new("momentum_distribution.normalization", tol.inequality, digest);
    let mut max = VerificationReport::new("momentum_distribution.maximum", 0.0, digest);
    let mut conv = VerificationReport::new("momentum_distribution.convolution", tol.inequality, digest);
    norm.record("rho_hat(0) - (2 pi)^(-d/2)", -(rho[origin] - c).abs());
    let mut positive = positivity_report(
        "momentum_distribution.positive",
        rho.iter()
            .enumerate()
            .map(|(k, &r)| (alloc::format!("p{k}"), r))
            .collect(),
        digest,
    );
    for (k, &r) in rho.iter().enumerate() {
        if k != origin {
            record_strict(&mut max, alloc::format!("p{k}"), rho[origin] - r - tol.strict_margin);
        }
    }
    let inv = 1.0 / c;
    for k in 0..rho.len() {
        for l in k..rho.len() {
            let minus = rho[grid.combine(k, l, -1)];
            let plus = rho[grid.combine(k, l, 1)];
            conv.record(
                alloc::format!("p{k},p{l}"),
                0.5 * (minus + plus) - inv * rho[k] * rho[l],
            );
        }
    }
    positive.note(alloc::format!(
        "min rho_hat = {:e}",
        rho.iter().copied().fold(f64::INFINITY, f64::min)
    ));
    Ok(alloc::vec![
        positive.finish(),
        norm.finish(),
        max.finish(),
        conv.finish()
    ])
}

/// `ρ̂ₙ(p)` nondecreasing in `n` at every node. Report id
/// `momentum_distribution.monotone_in_n`.
pub fn verify_momentum_monotone(family: &ModelFamily, tol: &Tolerances, digest: &str) -> Result<VerificationReport> {
    let s = family_series(family, &[])?;
    let mut r = VerificationReport::new("momentum_distribution.monotone_in_n", tol.inequality, digest);
    for t in 1..s.rho_hat.len() {
        for k in 0..s.rho_hat[t].len() {
            r.record(
                alloc::format!("n={}->{} p{k}", s.cutoffs[t - 1], s.cutoffs[t]),
                s.rho_hat[t][k] - s.rho_hat[t - 1][k],
            );
        }
    }
    Ok(r.finish())
}

/// The momentum-distribution suite on every member of `family` plus the
/// monotonicity in `n`.
pub fn verify_momentum_suite(family: &ModelFamily, tol: &Tolerances, digest: &str) -> Result<Vec<VerificationReport>> {
    let mut merged: Vec<VerificationReport> = Vec::new();
    for n in family.cutoffs() {
        let m = family.model(n)?;
        for r in verify_momentum_distribution(&m, tol, digest)? {
            match merged.iter_mut().find(|x| x.check_id == r.check_id) {
                Some(x) => {
                    for inst in r.instances {
                        x.record(alloc::format!("n={n} {}", inst.label), inst.margin);
                    }
                    x.notes
                        .extend(r.notes.into_iter().map(|s| alloc::format!("n={n}: {s}")));
                }
                None => {
                    let mut x = VerificationReport::new(&r.check_id, r.tolerance, digest);
                    for inst in r.instances {
                        x.record(alloc::format!("n={n} {}", inst.label), inst.margin);
                    }
                    x.notes
                        .extend(r.notes.into_iter().map(|s| alloc::format!("n={n}: {s}")));
                    merged.push(x);
                }
            }
        }
    }
    merged.push(verify_momentum_monotone(family, tol, digest)?);
    Ok(merged)
}
