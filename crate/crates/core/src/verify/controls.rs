use alloc::string::String;
use alloc::vec::Vec;

use super::cone_suite::{random_reducible, unique_positive_ground};
use super::family::ModelFamily;
use super::inequalities::{first_inequality_on, second_inequality_on, verify_monotone_in_n, verify_potential_order};
use super::report::VerificationReport;
use super::Tolerances;
use crate::cone::{ConeDescriptor, ConeMap};
use crate::doubled::{check_momentum_doubling, check_potential_doubling, Sign};
use crate::error::Result;
use crate::lattice::{realize_potential, Grid, Kinetic, PotentialKind, TestFunction, TestFunctionClass};
use crate::linalg::{metzler_expm, RMatrix};
use crate::rng;
use crate::spectral::{Basis, LatticeModel, SemigroupMethod};
#[allow(unused_imports)]
use num_traits::Float;

/// A hat in `𝔄` that is not even: one bump at the first nonzero momentum
/// on the positive side.
pub fn non_even_function(grid: &Grid) -> Result<TestFunction> {
    let mut hat = alloc::vec![0.0; grid.len()];
    hat[grid.origin()] = 1.0;
    hat[grid.flat([1, 0, 0])] = 0.5;
    Ok(TestFunction::new(TestFunctionClass::A, hat, grid)?.normalized())
}

fn caught(report: &mut VerificationReport, label: &str, was_caught: bool, how: String) {
    report.record(label, if was_caught { 0.0 } else { -1.0 });
    report.note(alloc::format!("{label}: {how}"));
}

fn outcome<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "accepted".into(),
        Err(e) => alloc::format!("rejected: {e}"),
    }
}

/// Deliberately violated hypotheses. Each control must be rejected with an
/// error, skipped with a note, or produce a failing report; a control that
/// passes silently records margin −1. Report id `negative_control`.
pub fn verify_negative_controls(
    grid: &Grid,
    mass: f64,
    seed: u64,
    tol: &Tolerances,
    digest: &str,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("negative_control", 0.0, digest);
    let family = ModelFamily::yukawa(grid, mass, 2, 4)?;
    let w = family.potential(4)?;
    let model = LatticeModel::new(grid, &w, Kinetic::Lattice)?;
    let odd = non_even_function(grid)?;
    let even = TestFunction::constant(grid, 1.0)?;

    let res = second_inequality_on(&model, &[(odd.clone(), even.clone())], tol, digest);
    caught(&mut r, "non-even f in second inequality", res.is_err(), outcome(&res));

    let res = verify_monotone_in_n(&family, core::slice::from_ref(&odd), tol, digest);
    caught(&mut r, "non-even f in monotonicity in n", res.is_err(), outcome(&res));

    let res = verify_potential_order(&model, &model, core::slice::from_ref(&odd), tol, digest);
    caught(&mut r, "non-even f in potential ordering", res.is_err(), outcome(&res));

    for (name, sign) in [("plus", Sign::Plus), ("minus", Sign::Minus)] {
        let rep = check_potential_doubling(&odd, sign, seed, digest)?;
        let flagged = !rep.passed || rep.notes.iter().any(|n| n.contains("not even"));
        caught(
            &mut r,
            &alloc::format!("non-even f in position doubling ({name})"),
            flagged,
            alloc::format!("passed={} worst={:e}", rep.passed, rep.worst_margin),
        );
        let rep = check_momentum_doubling(&odd, sign, seed, digest)?;
        let flagged = !rep.passed || rep.notes.iter().any(|n| n.contains("not even"));
        caught(
            &mut r,
            &alloc::format!("non-even f in momentum doubling ({name})"),
            flagged,
            alloc::format!("passed={} worst={:e}", rep.passed, rep.worst_margin),
        );
    }

    let mut bad = w.hat.clone();
    bad[grid.flat([2, 0, 0])] = -0.1;
    bad[grid.flat([-2, 0, 0])] = -0.1;
    let res = realize_potential(PotentialKind::CustomFourier { hat_values: bad }, grid);
    caught(
        &mut r,
        "sign-indefinite potential transform",
        res.is_err(),
        outcome(&res),
    );

    let mut lopsided = w.hat.clone();
    lopsided[grid.flat([1, 0, 0])] *= 2.0;
    let res = realize_potential(PotentialKind::CustomFourier { hat_values: lopsided }, grid);
    caught(&mut r, "non-even potential transform", res.is_err(), outcome(&res));

    let mut negative = even.clone();
    negative.hat[grid.flat([1, 0, 0])] = -0.25;
    let rep = first_inequality_on(&model, &[negative], tol, digest)?;
    caught(
        &mut r,
        "negative hat in first inequality",
        rep[0].instance_count() == 0 && rep[0].notes.iter().any(|n| n.contains("skipped")),
        alloc::format!("{} instances, notes {:?}", rep[0].instance_count(), rep[0].notes),
    );

    let res = verify_potential_order(
        &model,
        &LatticeModel::new(grid, &w.scaled(2.0)?, Kinetic::Lattice)?,
        &[even],
        tol,
        digest,
    );
    caught(&mut r, "incomparable potentials", res.is_err(), outcome(&res));

    // A 2-d potential depending on x only: its momentum-basis convolution
    // never changes p_y, so the coupling splits into one block per p_y.
    let g2 = Grid::new(2, 7, grid.half_length())?;
    let hat: Vec<f64> = (0..g2.len())
        .map(|k| {
            let c = g2.centered(k);
            if c[1] == 0 {
                (-(g2.momentum(k)[0]).powi(2)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let v2 = realize_potential(PotentialKind::CustomFourier { hat_values: hat }, &g2)?;
    let m2 = LatticeModel::new(&g2, &v2, Kinetic::Lattice)?;
    let h = m2.hamiltonian.momentum_matrix();
    let coupling = RMatrix::from_fn(h.nrows(), h.ncols(), |i, j| if i == j { 0.0 } else { -h[(i, j)] });
    let ergodic = ConeDescriptor::orthant(h.nrows()).is_ergodic(&ConeMap::Matrix(coupling))?;
    let s = m2.semigroup_in(1.0, SemigroupMethod::Metzler, Basis::Momentum)?;
    let improving = s.iter().all(|&x| x > 0.0);
    caught(
        &mut r,
        "reducible momentum-space convolution",
        !ergodic && !improving,
        alloc::format!("ergodic={ergodic}, improving={improving}"),
    );

    let mut g = rng::seeded(seed);
    let mut missed = 0usize;
    for n in [4usize, 8, 16] {
        for _ in 0..10 {
            let b = random_reducible(&mut g, n);
            let ergodic = ConeDescriptor::orthant(n).is_ergodic(&ConeMap::Matrix(b.clone()))?;
            let h = RMatrix::identity(n, n) - &b;
            let e = metzler_expm(&(-&h), 1.0, 1e-12)?;
            if ergodic || e.iter().all(|&x| x > 0.0) || unique_positive_ground(&h, 1e-10)? {
                missed += 1;
            }
        }
    }
    caught(
        &mut r,
        "random block-diagonal couplings",
        missed == 0,
        alloc::format!("{missed} of 30 reported as ergodic or improving"),
    );
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_control_is_caught() {
        let g = Grid::new(1, 15, 5.0).unwrap();
        let r = verify_negative_controls(&g, 1.0, 3, &Tolerances::default(), "").unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert!(r.instance_count() >= 10);
    }
}
