use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::actions::{HadamardAction, KronSumAction, ShiftKind, ShiftSandwichSum};
use super::coordinates::CoordinateChange;
use crate::cone::{hs_pack, ConeDescriptor, ConeMap, DEFAULT_RANDOM_PROBES};
use crate::error::{Error, Result};
use crate::lanczos::{lowest_eigenpairs, LinearOperator};
use crate::lattice::{Fourier, Grid, TestFunction};
use crate::linalg::{hermitian_eigen, max_abs_complex, to_complex, CMatrix, RMatrix};
use crate::rng;
use crate::spectral::{GroundState, LatticeModel};
use crate::verify::VerificationReport;
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance of the doubled-space checks.
pub const DOUBLING_TOL: f64 = 1e-9;

/// `f ⊗ 1 + 1 ⊗ f` or `f ⊗ 1 − 1 ⊗ f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// `H` on the doubled lattice: `ℍ = H ⊗ 1 + 1 ⊗ H` in `(X₁, X₂)`
/// coordinates, with positivity measured by the PSD cone of
/// Hilbert–Schmidt space.
#[derive(Debug, Clone)]
pub struct DoubledModel {
    pub base: LatticeModel,
    pub change: CoordinateChange,
    pub cone: ConeDescriptor,
}

impl DoubledModel {
    pub fn new(base: &LatticeModel) -> Result<Self> {
        let change = CoordinateChange::new(base.grid())?;
        let cone = ConeDescriptor::psd(base.dim()).with_tol(DOUBLING_TOL);
        Ok(Self {
            base: base.clone(),
            change,
            cone,
        })
    }

    pub fn side(&self) -> usize {
        self.base.dim()
    }

    /// Dense `P (H ⊗ 1 + 1 ⊗ H) P⁻¹`; size `n² × n²`.
    pub fn extended_matrix(&self) -> Result<RMatrix> {
        let sum = super::coordinates::extended_operator(&self.base.hamiltonian.matrix, super::Side::Sym)?;
        let p = self.change.permutation_matrix();
        Ok(&p * sum * p.transpose())
    }

    /// `ℍ` as a matrix-free operator in `(X₁, X₂)` coordinates.
    pub fn operator(&self) -> ExtendedOperator<'_> {
        ExtendedOperator { model: self }
    }

    /// `e^{−β(ℍ − 2E)}` as an action on Hilbert–Schmidt matrices, with the
    /// shift `E` supplied by the caller.
    pub fn semigroup_action(&self, beta: f64, shift: f64) -> KronSumAction {
        let s = to_complex(&self.base.apply_spectral(|l| (-beta * (l - shift)).exp()));
        KronSumAction {
            change: self.change.clone(),
            terms: vec![(1.0, s.clone(), s)],
        }
    }

    /// `hs_pack(ψ ⊗ ψ)` in `(x₁, x₂)` and in `(X₁, X₂)` coordinates.
    pub fn ground_product(&self, gs: &GroundState) -> (CMatrix, CMatrix) {
        let n = self.side();
        let old = CMatrix::from_fn(n, n, |a, b| Complex64::new(gs.vector[a] * gs.vector[b], 0.0));
        let new = self.change.matrix_to_new(&old);
        (old, new)
    }
}

/// Matrix-free `P (H ⊗ 1 + 1 ⊗ H) P⁻¹`.
pub struct ExtendedOperator<'a> {
    model: &'a DoubledModel,
}

impl LinearOperator for ExtendedOperator<'_> {
    fn dim(&self) -> usize {
        let n = self.model.side();
        n * n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.model.side();
        let change = &self.model.change;
        let v = RMatrix::from_row_slice(n, n, &change.to_old(x));
        let h = &self.model.base.hamiltonian.matrix;
        let y = h * &v + &v * h.transpose();
        let mut row_major = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                row_major[a * n + b] = y[(a, b)];
            }
        }
        out.copy_from_slice(&change.to_new(&row_major));
    }
}

fn probe_margin(
    report: &mut VerificationReport,
    cone: &ConeDescriptor,
    label: &str,
    map: ConeMap,
    seed: u64,
) -> Result<()> {
    let cert = cone.probe_certificate(&map, DEFAULT_RANDOM_PROBES, seed)?;
    report.record(
        alloc::format!("{label}: probe min eigenvalue ({} probes)", cert.probes),
        cert.worst_min_eigenvalue,
    );
    report.record(
        alloc::format!("{label}: probe hermiticity"),
        -cert.worst_hermitian_deviation,
    );
    Ok(())
}

fn random_inputs(n: usize, count: usize, seed: u64) -> Vec<CMatrix> {
    let mut r = rng::seeded(seed);
    (0..count)
        .map(|_| CMatrix::from_fn(n, n, |_, _| rng::complex_normal(&mut r)))
        .collect()
}

fn phase(grid: &Grid, k: usize, j: usize) -> f64 {
    let (ck, cj) = (grid.centered(k), grid.centered(j));
    let dot: i64 = (0..grid.dim()).map(|a| ck[a] * cj[a]).sum();
    2.0 * PI * dot.rem_euclid(grid.points_per_axis() as i64) as f64 / grid.points_per_axis() as f64
}

fn inapplicable(report: &mut VerificationReport, f: &TestFunction) {
    if !f.is_even() {
        report.note("f is not even: the cos/sin decomposition requires f in the even class and does not apply");
    }
}

/// Positivity of the multiplication operators `f(x₁) ± f(x₂)` in
/// `(X₁, X₂)` coordinates.
///
/// The operator is compared with `Σₚ 2(2π)^{−d/2}(π/L)ᵈ f̂(p) · cₚ ξ cₚ`
/// where `cₚ = diag(cos p·X)` (plus) or `diag(sin p·X)` (minus); every
/// summand is a sandwich map with a nonnegative weight. The probe
/// certificate on the operator itself is recorded as a cross-check.
pub fn check_potential_doubling(f: &TestFunction, sign: Sign, seed: u64, digest: &str) -> Result<VerificationReport> {
    let grid = f.grid;
    let change = CoordinateChange::new(&grid)?;
    let n = grid.len();
    let mut report = VerificationReport::new(
        &alloc::format!("doubling.position_{}", sign.name()),
        DOUBLING_TOL,
        digest,
    );
    inapplicable(&mut report, f);

    let old: Vec<Complex64> = (0..n * n)
        .map(|i| f.realized[i / n] + f.realized[i % n] * sign.value())
        .collect();
    let direct = hs_pack(&change.to_new(&old))?;

    let weight = grid.continuum_factor() * grid.momentum_weight();
    let mut decomposition = CMatrix::zeros(n, n);
    let mut summands = 0usize;
    let mut min_coefficient = f64::INFINITY;
    for k in 0..n {
        if f.hat[k] == 0.0 {
            continue;
        }
        let c = 2.0 * weight * f.hat[k];
        let profile: Vec<f64> = (0..n)
            .map(|j| match sign {
                Sign::Plus => phase(&grid, k, j).cos(),
                Sign::Minus => phase(&grid, k, j).sin(),
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                decomposition[(a, b)] += Complex64::new(c * profile[a] * profile[b], 0.0);
            }
        }
        summands += 1;
        min_coefficient = min_coefficient.min(c);
    }
    let scale = max_abs_complex(&direct).max(1.0);
    report.record(
        "decomposition residual",
        -max_abs_complex(&(&direct - &decomposition)) / scale,
    );
    if summands > 0 {
        report.record("smallest sandwich weight", min_coefficient);
    }
    report.note(alloc::format!(
        "{summands} sandwich summands diag(cos/sin p·X) ξ diag(cos/sin p·X)"
    ));
    let cone = ConeDescriptor::psd(n).with_tol(DOUBLING_TOL);
    probe_margin(
        &mut report,
        &cone,
        "operator",
        ConeMap::Action(Box::new(HadamardAction { weights: direct })),
        seed,
    )?;
    Ok(report.finish())
}

/// Index-level half shift `t = s·2⁻¹ mod N` for the momentum node `s`.
fn half_shift(grid: &Grid, s: usize) -> usize {
    let c = grid.centered(s);
    let h = grid.inverse_of_two();
    grid.flat([c[0] * h, c[1] * h, c[2] * h])
}

/// The shift-sandwich decomposition of `f(−i∇)⊗1 ± 1⊗f(−i∇)` in
/// `(X₁, X₂)` coordinates.
pub fn momentum_decomposition(f: &TestFunction, sign: Sign) -> ShiftSandwichSum {
    let grid = f.grid;
    let weight = grid.continuum_factor() * grid.momentum_weight();
    let coefficients: Vec<(f64, usize)> = (0..grid.len())
        .filter(|&s| f.hat[s] != 0.0)
        .map(|s| {
            let c = 2.0 * weight * f.hat[s];
            (if sign == Sign::Plus { c } else { -c }, half_shift(&grid, s))
        })
        .collect();
    let kind = match sign {
        Sign::Plus => ShiftKind::Cos,
        Sign::Minus => ShiftKind::Sin,
    };
    ShiftSandwichSum::new(&grid, kind, &coefficients)
}

/// `f(−i∇)⊗1 + 1⊗f(−i∇) ⊵ 0` (plus) and `f(−i∇)⊗1 − 1⊗f(−i∇) ⊴ 0`
/// (minus) with respect to the PSD cone in `(X₁, X₂)` coordinates.
///
/// The operator is built from the dense position-basis matrix
/// `G = F† diag(f) F` as `V ↦ G V ± V Gᵀ` and compared on seeded random
/// inputs with the sum of half-shift sandwiches from
/// [`momentum_decomposition`].
pub fn check_momentum_doubling(f: &TestFunction, sign: Sign, seed: u64, digest: &str) -> Result<VerificationReport> {
    let grid = f.grid;
    let change = CoordinateChange::new(&grid)?;
    let n = grid.len();
    let mut report = VerificationReport::new(
        &alloc::format!("doubling.momentum_{}", sign.name()),
        DOUBLING_TOL,
        digest,
    );
    inapplicable(&mut report, f);

    let fm = Fourier::new(&grid).matrix();
    let symbol = CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&f.realized));
    let g = fm.adjoint() * symbol * &fm;
    let id = CMatrix::identity(n, n);
    // Oriented so that the probed map should be positivity preserving.
    let orient = sign.value();
    let direct = KronSumAction {
        change: change.clone(),
        terms: vec![(orient, g.clone(), id.clone()), (1.0, id, g)],
    };
    let decomposition = momentum_decomposition(f, sign);

    let mut residual = 0.0_f64;
    for xi in random_inputs(n, 4, seed ^ 0x5eed) {
        use crate::cone::HsAction;
        let a = direct.apply(&xi) * Complex64::new(orient, 0.0);
        let b = decomposition.apply(&xi);
        residual = residual.max(max_abs_complex(&(&a - &b)) / max_abs_complex(&a).max(1.0));
    }
    report.record("decomposition residual (random inputs)", -residual);
    let min_coefficient = decomposition
        .terms
        .iter()
        .map(|(c, _, _)| c * orient)
        .fold(f64::INFINITY, f64::min);
    if !decomposition.terms.is_empty() {
        report.record("smallest sandwich weight", min_coefficient);
    }
    report.note(alloc::format!(
        "{} half-shift sandwich summands, orientation {}",
        decomposition.terms.len(),
        if orient > 0.0 { "⊵ 0" } else { "⊴ 0" }
    ));
    let cone = ConeDescriptor::psd(n).with_tol(DOUBLING_TOL);
    probe_margin(
        &mut report,
        &cone,
        "oriented operator",
        ConeMap::Action(Box::new(direct)),
        seed,
    )?;
    Ok(report.finish())
}

/// Positivity of the extended semigroup and its consequences:
///
/// * `doubling.semigroup`: `e^{−βℍ}` maps the probe set into the PSD cone
///   for every `β` in `betas`;
/// * `doubling.ground_product`: `hs_pack(ψ⊗ψ)` is the rank-one projection
///   `|ψ⟩⟨ψ|` in `(x₁, x₂)` coordinates and PSD in `(X₁, X₂)` coordinates;
/// * `doubling.extended_ground`: the lowest eigenpair of `ℍ` is
///   `(2E₀, ψ⊗ψ)`, by Lanczos;
/// * `doubling.semigroup_order` (when `lower` is given, with `lower ⪯ upper`
///   potentials): `e^{−βℍ_upper} − e^{−βℍ_lower}` maps the probe set into
///   the PSD cone, both exponentials sharing the shift `E₀(upper)`.
pub fn extended_semigroup_positivity(
    upper: &LatticeModel,
    lower: Option<&LatticeModel>,
    betas: &[f64],
    seed: u64,
    digest: &str,
) -> Result<Vec<VerificationReport>> {
    let doubled = DoubledModel::new(upper)?;
    let n = doubled.side();
    let e0 = upper.ground_energy();
    let mut out = Vec::new();

    let mut semigroup = VerificationReport::new("doubling.semigroup", DOUBLING_TOL, digest);
    for &beta in betas {
        let action = doubled.semigroup_action(beta, e0);
        probe_margin(
            &mut semigroup,
            &doubled.cone,
            &alloc::format!("beta={beta}"),
            ConeMap::Action(Box::new(action)),
            seed,
        )?;
    }
    out.push(semigroup.finish());

    let gs = upper.ground_state()?;
    let mut product = VerificationReport::new("doubling.ground_product", 1e-10, digest);
    let (old, new) = doubled.ground_product(&gs);
    let (vals, _) = hermitian_eigen(&old);
    let top = vals[n - 1];
    let rest = vals[..n - 1].iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    product.record("x-coordinates: top eigenvalue = 1", -(top - 1.0).abs());
    product.record("x-coordinates: other eigenvalues = 0", -rest);
    let herm = max_abs_complex(&(&new - new.adjoint()));
    let (vals_new, _) = hermitian_eigen(&crate::cone::hermitianize(&new));
    product.record("X-coordinates: hermiticity", -herm);
    product.record("X-coordinates: min eigenvalue", vals_new[0]);
    let rank = vals_new.iter().filter(|v| v.abs() > 1e-10).count();
    product.note(alloc::format!(
        "in (X1, X2) coordinates the packed ground product has {rank} eigenvalues above 1e-10"
    ));
    out.push(product.finish());

    let mut ground = VerificationReport::new("doubling.extended_ground", DOUBLING_TOL, digest);
    let op = doubled.operator();
    let start = vec![1.0; n * n];
    let ritz = lowest_eigenpairs(&op, &start, 1, 800.min(n * n), 1e-13)?;
    let energy = ritz.values[0];
    ground.record(
        "lowest eigenvalue = 2 E0",
        -(energy - 2.0 * e0).abs() / e0.abs().max(1.0),
    );
    let mut psi2 = doubled.change.to_new(
        &(0..n * n)
            .map(|i| gs.vector[i / n] * gs.vector[i % n])
            .collect::<Vec<f64>>(),
    );
    let v = &ritz.vectors[0];
    let dot: f64 = v.iter().zip(&psi2).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        psi2.iter_mut().for_each(|x| *x = -*x);
    }
    let dist = v.iter().zip(&psi2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    ground.record("ground vector = psi ⊗ psi", -dist);
    ground.note(alloc::format!(
        "Lanczos: {} iterations, residual {:e}",
        ritz.iterations,
        ritz.residuals[0]
    ));
    out.push(ground.finish());

    if let Some(lower) = lower {
        if lower.grid() != upper.grid() {
            return Err(Error::GridMismatch("ordered models live on different grids".into()));
        }
        let mut order = VerificationReport::new("doubling.semigroup_order", DOUBLING_TOL, digest);
        for &beta in betas {
            let su = to_complex(&upper.apply_spectral(|l| (-beta * (l - e0)).exp()));
            let sl = to_complex(&lower.apply_spectral(|l| (-beta * (l - e0)).exp()));
            let action = KronSumAction {
                change: doubled.change.clone(),
                terms: vec![(1.0, su.clone(), su), (-1.0, sl.clone(), sl)],
            };
            probe_margin(
                &mut order,
                &doubled.cone,
                &alloc::format!("beta={beta}"),
                ConeMap::Action(Box::new(action)),
                seed,
            )?;
        }
        out.push(order.finish());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::HsAction;
    use crate::lattice::{realize_potential, sample_test_functions, Kinetic, PotentialKind, TestFunctionClass};

    fn yukawa(n: usize, l: f64, cutoff: u32) -> LatticeModel {
        let g = Grid::new(1, n, l).unwrap();
        let v = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff }, &g).unwrap();
        LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap()
    }

    #[test]
    fn constant_function_differences_vanish() {
        let g = Grid::new(1, 9, 3.0).unwrap();
        let f = TestFunction::constant(&g, 1.0).unwrap();
        let r = check_potential_doubling(&f, Sign::Minus, 0, "").unwrap();
        assert!(r.passed, "{r:?}");
        let d = momentum_decomposition(&f, Sign::Minus);
        let xi = random_inputs(9, 1, 3).pop().unwrap();
        assert!(max_abs_complex(&d.apply(&xi)) < 1e-15);
    }

    #[test]
    fn potential_doubling_holds_for_yukawa_and_samples() {
        let m = yukawa(15, 4.0, 4);
        let v = m.hamiltonian.potential.as_test_function().unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let r = check_potential_doubling(&v, sign, 1, "").unwrap();
            assert!(r.passed, "{r:?}");
        }
        for f in sample_test_functions(TestFunctionClass::AEven, 6, 3, m.grid()).unwrap() {
            for sign in [Sign::Plus, Sign::Minus] {
                let r = check_potential_doubling(&f, sign, 2, "").unwrap();
                assert!(r.passed, "{r:?}");
                let r = check_momentum_doubling(&f, sign, 2, "").unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn momentum_decomposition_matches_dense_superoperator() {
        let g = Grid::new(1, 7, 2.0).unwrap();
        let f = &sample_test_functions(TestFunctionClass::AEven, 4, 8, &g).unwrap()[3];
        let change = CoordinateChange::new(&g).unwrap();
        let gm = crate::spectral::momentum_multiplier(f).unwrap();
        let p = change.permutation_matrix();
        for sign in [Sign::Plus, Sign::Minus] {
            let op = super::super::extended_operator(&gm, super::super::Side::Left).unwrap()
                + super::super::extended_operator(&gm, super::super::Side::Right).unwrap() * sign.value();
            let op_new = &p * op * p.transpose();
            let d = momentum_decomposition(f, sign);
            // Column e_i of the dense operator against the action on hs_pack(e_i).
            for i in 0..49 {
                let mut e = vec![Complex64::new(0.0, 0.0); 49];
                e[i] = Complex64::new(1.0, 0.0);
                let got = d.apply(&hs_pack(&e).unwrap());
                for r in 0..49 {
                    assert!((got[(r / 7, r % 7)].re - op_new[(r, i)]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn non_even_function_is_flagged() {
        let g = Grid::new(1, 9, 3.0).unwrap();
        let odd = sample_test_functions(TestFunctionClass::A, 20, 4, &g)
            .unwrap()
            .into_iter()
            .find(|f| !f.is_even())
            .unwrap();
        for check in [check_potential_doubling, check_momentum_doubling] {
            let r = check(&odd, Sign::Minus, 0, "").unwrap();
            assert!(!r.passed);
            assert!(r.notes.iter().any(|n| n.contains("not even")));
        }
    }

    #[test]
    fn extended_semigroup_checks_pass_on_small_model() {
        let upper = yukawa(15, 5.0, 6);
        let lower = yukawa(15, 5.0, 3);
        let reports = extended_semigroup_positivity(&upper, Some(&lower), &[0.0, 0.5, 1.0, 2.0], 0, "").unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
        let dm = DoubledModel::new(&upper).unwrap();
        let dense = dm.extended_matrix().unwrap();
        let x: Vec<f64> = (0..225).map(|i| (i as f64 * 0.1).cos()).collect();
        let mut y = vec![0.0; 225];
        dm.operator().apply(&x, &mut y);
        let want = &dense * crate::linalg::RVector::from_column_slice(&x);
        assert!(y.iter().zip(want.iter()).all(|(a, b)| (a - b).abs() < 1e-10));
    }
}
