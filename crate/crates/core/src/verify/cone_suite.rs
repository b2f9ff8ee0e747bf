use alloc::vec::Vec;

use num_complex::Complex64;

use super::inequalities::{positivity_report, record_strict};
use super::report::VerificationReport;
use super::Tolerances;
use crate::cone::{ConeDescriptor, ConeElement, ConeMap};
use crate::error::Result;
use crate::linalg::{
    hermitian_eigen, max_abs, max_abs_complex, metzler_expm, min_entry, CMatrix, Eigensystem, RMatrix, RVector,
};
use crate::rng::{self, SeededRng};
use crate::spectral::{Basis, LatticeModel, SemigroupMethod};
#[allow(unused_imports)]
use num_traits::Float;

/// Random symmetric matrix with entries in `[0, 1)` on a fraction
/// `density` of the off-diagonal pairs and zero diagonal.
fn random_nonnegative(r: &mut SeededRng, n: usize, density: f64) -> RMatrix {
    let mut b = RMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            if rng::uniform(r, 0.0, 1.0) < density {
                let x = rng::uniform(r, 0.0, 1.0);
                b[(i, j)] = x;
                b[(j, i)] = x;
            }
        }
    }
    b
}

fn random_diagonal(r: &mut SeededRng, n: usize, lo: f64, hi: f64) -> RMatrix {
    RMatrix::from_diagonal(&RVector::from_iterator(n, (0..n).map(|_| rng::uniform(r, lo, hi))))
}

/// Symmetric nonnegative matrix whose graph contains a ring through all
/// nodes in a random order, so it is irreducible.
pub fn random_ergodic(r: &mut SeededRng, n: usize) -> RMatrix {
    let mut b = random_nonnegative(r, n, 0.15);
    let order = random_permutation(r, n);
    for k in 0..n {
        let (i, j) = (order[k], order[(k + 1) % n]);
        if i != j {
            let x = rng::uniform(r, 0.2, 1.0);
            b[(i, j)] = x;
            b[(j, i)] = x;
        }
    }
    b
}

/// Symmetric nonnegative matrix that is block diagonal after a random
/// relabelling of the nodes.
pub fn random_reducible(r: &mut SeededRng, n: usize) -> RMatrix {
    let split = 1 + (rng::uniform(r, 0.0, (n - 1) as f64) as usize).min(n - 2);
    let first = random_ergodic(r, split);
    let second = random_ergodic(r, n - split);
    let order = random_permutation(r, n);
    let mut b = RMatrix::zeros(n, n);
    for i in 0..split {
        for j in 0..split {
            b[(order[i], order[j])] = first[(i, j)];
        }
    }
    for i in 0..n - split {
        for j in 0..n - split {
            b[(order[split + i], order[split + j])] = second[(i, j)];
        }
    }
    b
}

fn random_permutation(r: &mut SeededRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng::uniform(r, 0.0, (i + 1) as f64) as usize).min(i);
        p.swap(i, j);
    }
    p
}

fn relative_min(m: &RMatrix) -> f64 {
    min_entry(m) / max_abs(m).max(1.0)
}

/// Does the ground vector of the symmetric `h` have a resolved gap and
/// strictly positive entries (up to sign)?
pub fn unique_positive_ground(h: &RMatrix, threshold: f64) -> Result<bool> {
    let e = Eigensystem::new(h)?;
    let scale = e.norm().max(1.0);
    if e.dim() > 1 && !(e.values[1] - e.values[0] > 1e-10 * scale) {
        return Ok(false);
    }
    let v = e.vectors.column(0);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let vmax = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    Ok(v.iter().all(|x| sign * x > threshold * vmax))
}

fn hilbert_orthant(report: &mut VerificationReport, r: &mut SeededRng, n: usize, i: usize) -> Result<()> {
    let cone = ConeDescriptor::orthant(n);
    let x = RVector::from_iterator(n, (0..n).map(|_| rng::normal(r)));
    let el = ConeElement::Vector(x.clone());
    let (plus, minus) = cone.decompose(&el)?;
    let (ConeElement::Vector(p), ConeElement::Vector(m)) = (&plus, &minus) else {
        unreachable!("orthant decomposition returns vectors")
    };
    let scale = x.amax().max(1.0);
    report.record(
        alloc::format!("n={n} #{i} reconstruction"),
        -(p - m - &x).amax() / scale,
    );
    report.record(
        alloc::format!("n={n} #{i} orthogonality"),
        -cone.pairing(&plus, &minus)?.abs() / (scale * scale),
    );
    report.record(alloc::format!("n={n} #{i} parts in cone"), p.min().min(m.min()));
    let y = ConeElement::Vector(RVector::from_iterator(n, (0..n).map(|_| rng::uniform(r, 0.0, 1.0))));
    report.record(
        alloc::format!("n={n} #{i} pairing of cone elements"),
        cone.pairing(&plus, &y)?,
    );
    Ok(())
}

fn hilbert_psd(report: &mut VerificationReport, r: &mut SeededRng, n: usize, i: usize) -> Result<()> {
    let cone = ConeDescriptor::psd(n);
    let z = CMatrix::from_fn(n, n, |_, _| rng::complex_normal(r));
    let re = (&z + z.adjoint()) * Complex64::new(0.5, 0.0);
    let im = (&z - z.adjoint()) * Complex64::new(0.0, -0.5);
    let scale = max_abs_complex(&z).max(1.0);
    report.record(
        alloc::format!("n={n} #{i} real and imaginary parts"),
        -max_abs_complex(&(&re + &im * Complex64::new(0.0, 1.0) - &z)) / scale,
    );
    let (plus, minus) = cone.decompose(&ConeElement::Matrix(re.clone()))?;
    let (ConeElement::Matrix(p), ConeElement::Matrix(m)) = (&plus, &minus) else {
        unreachable!("PSD decomposition returns matrices")
    };
    report.record(
        alloc::format!("n={n} #{i} reconstruction"),
        -max_abs_complex(&(p - m - &re)) / scale,
    );
    report.record(
        alloc::format!("n={n} #{i} orthogonality"),
        -cone.pairing(&plus, &minus)?.abs() / (scale * scale),
    );
    let (ep, _) = hermitian_eigen(p);
    let (em, _) = hermitian_eigen(m);
    report.record(alloc::format!("n={n} #{i} parts in cone"), ep[0].min(em[0]) / scale);
    let g = CMatrix::from_fn(n, n, |_, _| rng::complex_normal(r));
    let y = ConeElement::Matrix(&g * g.adjoint());
    report.record(
        alloc::format!("n={n} #{i} pairing of cone elements"),
        cone.pairing(&plus, &y)? / (scale * max_abs_complex(&(&g * g.adjoint())).max(1.0)),
    );
    Ok(())
}

/// Randomized checks of the cone calculus on `instances` seeded instances
/// per size:
///
/// * `cone.hilbert_orthant`, `cone.hilbert_psd`: pairing, decomposition and
///   spanning axioms of a Hilbert cone;
/// * `cone.perturbed_semigroup`: `e^{−β(A−B)}` entrywise nonnegative for
///   diagonal `A` and entrywise nonnegative `B`;
/// * `cone.semigroup_order`: `e^{−β(A−C)} − e^{−βA}` entrywise nonnegative
///   for Metzler `−A` and nonnegative `C`;
/// * `cone.perron_frobenius`: "ergodic", "unique ground state with strictly
///   positive vector" and "`e^{−A}` entrywise positive" agree on ergodic and
///   reducible instances (margin 0 on agreement, −1 otherwise);
/// * `cone.ergodic_improving`: `e^{−(A−B)}` has strictly positive entries
///   for ergodic `B`.
pub fn verify_cone_theory(
    sizes: &[usize],
    instances: usize,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let mut orth = VerificationReport::new("cone.hilbert_orthant", tol.inequality, digest);
    let mut psd = VerificationReport::new("cone.hilbert_psd", tol.inequality, digest);
    let mut perturbed = VerificationReport::new("cone.perturbed_semigroup", tol.cone, digest);
    let mut order = VerificationReport::new("cone.semigroup_order", tol.cone, digest);
    let mut pff = VerificationReport::new("cone.perron_frobenius", 0.0, digest);
    let mut improving = VerificationReport::new("cone.ergodic_improving", 0.0, digest);
    let beta = 1.0;
    let (mut ergodic_count, mut reducible_count) = (0usize, 0usize);
    for (s, &n) in sizes.iter().enumerate() {
        let mut r = rng::substream(seed, s as u64);
        for i in 0..instances {
            hilbert_orthant(&mut orth, &mut r, n, i)?;
            hilbert_psd(&mut psd, &mut r, n, i)?;

            let a = random_diagonal(&mut r, n, 0.5, 3.0);
            let b = random_nonnegative(&mut r, n, 0.4);
            let e = Eigensystem::new(&(&a - &b))?.apply_fn(|l| (-beta * l).exp());
            perturbed.record(alloc::format!("n={n} #{i}"), relative_min(&e));

            let metzler = &random_diagonal(&mut r, n, 0.5, 3.0) - random_nonnegative(&mut r, n, 0.3);
            let c = random_nonnegative(&mut r, n, 0.3) + random_diagonal(&mut r, n, 0.0, 0.5);
            let ea = Eigensystem::new(&metzler)?.apply_fn(|l| (-beta * l).exp());
            let eb = Eigensystem::new(&(&metzler - &c))?.apply_fn(|l| (-beta * l).exp());
            order.record(
                alloc::format!("n={n} #{i}"),
                min_entry(&(&eb - &ea)) / max_abs(&eb).max(1.0),
            );

            let ergodic_instance = i % 2 == 0;
            let b = if ergodic_instance {
                random_ergodic(&mut r, n)
            } else {
                random_reducible(&mut r, n)
            };
            let h = random_diagonal(&mut r, n, 0.0, 2.0) - &b;
            let ergodic = ConeDescriptor::orthant(n).is_ergodic(&ConeMap::Matrix(b.clone()))?;
            let ground = unique_positive_ground(&h, 1e-10)?;
            let semigroup = metzler_expm(&(-&h), beta, 1e-12)?;
            let positive = semigroup.iter().all(|&x| x > 0.0);
            let agree = ergodic == ground && ground == positive && ergodic == ergodic_instance;
            pff.record(
                alloc::format!(
                    "n={n} #{i} {} (ergodic={ergodic}, ground={ground}, improving={positive})",
                    if ergodic_instance { "ergodic" } else { "reducible" }
                ),
                if agree { 0.0 } else { -1.0 },
            );
            if ergodic_instance {
                ergodic_count += 1;
                record_strict(&mut improving, alloc::format!("n={n} #{i}"), min_entry(&semigroup));
            } else {
                reducible_count += 1;
            }
        }
    }
    pff.note(alloc::format!(
        "{ergodic_count} ergodic and {reducible_count} reducible instances"
    ));
    Ok(alloc::vec![
        orth.finish(),
        psd.finish(),
        perturbed.finish(),
        order.finish(),
        pff.finish(),
        improving.finish()
    ])
}

/// Positivity structure of one lattice model:
///
/// * `ground_state.positive`, `ground_state.positive_momentum`: `ψ > 0`
///   and `ψ̂ > 0` at every node, down to the rounding floor;
/// * `semigroup.position_improving`, `semigroup.momentum_improving`:
///   `e^{−β(H−E₀)}` has strictly positive entries in each basis;
/// * `semigroup.trotter_positive`: every Trotter product is entrywise
///   nonnegative.
pub fn verify_positivity_structure(
    model: &LatticeModel,
    beta: f64,
    tol: &Tolerances,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let gs = model.ground_state()?;
    let mut out = alloc::vec![
        positivity_report(
            "ground_state.positive",
            gs.vector
                .iter()
                .enumerate()
                .map(|(j, &x)| (alloc::format!("psi x{j}"), x))
                .collect(),
            digest,
        ),
        positivity_report(
            "ground_state.positive_momentum",
            gs.psi_hat
                .iter()
                .enumerate()
                .map(|(k, &x)| (alloc::format!("psi_hat p{k}"), x))
                .collect(),
            digest,
        ),
    ];
    for (id, basis) in [
        ("semigroup.position_improving", Basis::Position),
        ("semigroup.momentum_improving", Basis::Momentum),
    ] {
        let mut r = VerificationReport::new(id, 0.0, digest);
        let s = model.semigroup_in(beta, SemigroupMethod::Metzler, basis)?;
        record_strict(&mut r, alloc::format!("beta={beta} min entry"), min_entry(&s));
        out.push(r.finish());
    }
    let mut trotter = VerificationReport::new("semigroup.trotter_positive", tol.inequality, digest);
    for steps in [1usize, 4, 16] {
        let s = model.semigroup(beta, SemigroupMethod::Trotter { steps })?;
        trotter.record(alloc::format!("beta={beta} steps={steps}"), relative_min(&s));
    }
    out.push(trotter.finish());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_ergodic_example() {
        let a = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let b = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = metzler_expm(&(&b - &a), 1.0, 1e-12).unwrap();
        // e^{−M} = e^{−t}(cosh r·I − sinh r/r·(M − tI)) with t = tr M/2.
        let r5 = 1.25f64.sqrt();
        let pre = (-1.5f64).exp();
        let want = [
            pre * (r5.cosh() + 0.5 * r5.sinh() / r5),
            pre * r5.sinh() / r5,
            pre * (r5.cosh() - 0.5 * r5.sinh() / r5),
        ];
        assert!((e[(0, 0)] - want[0]).abs() < 1e-14);
        assert!((e[(0, 1)] - want[1]).abs() < 1e-14);
        assert!((e[(1, 1)] - want[2]).abs() < 1e-14);
        assert!(ConeDescriptor::orthant(2).is_ergodic(&ConeMap::Matrix(b)).unwrap());
    }

    #[test]
    fn block_diagonal_coupling_leaves_off_block_zeros() {
        let mut r = rng::seeded(5);
        for n in [4, 8] {
            let b = random_reducible(&mut r, n);
            assert!(!ConeDescriptor::orthant(n)
                .is_ergodic(&ConeMap::Matrix(b.clone()))
                .unwrap());
            let e = metzler_expm(&(&b - RMatrix::identity(n, n)), 1.0, 1e-12).unwrap();
            assert!(e.iter().any(|&x| x == 0.0));
        }
    }

    #[test]
    fn small_suite_passes() {
        let reports = verify_cone_theory(&[4, 6], 20, 1, &Tolerances::default(), "").unwrap();
        for r in &reports {
            assert!(r.passed, "{}: {} {:?}", r.check_id, r.worst_margin, r.notes);
        }
    }
}
