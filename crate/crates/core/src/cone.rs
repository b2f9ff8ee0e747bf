//! Finite-dimensional self-dual cones and the operator relations built on
//! them.
//!
//! Two cones are supported: the nonnegative orthant of `ℝᴺ` and the cone of
//! positive semidefinite matrices inside Hilbert–Schmidt space `ℂⁿˣⁿ`. Both
//! are self-dual for their natural inner products, so membership can be read
//! off from pairings with extreme rays: entries for the orthant, rank-one
//! projections `|v⟩⟨v|` (i.e. eigenvalues) for the PSD cone.
//!
//! A linear map `A` *preserves positivity* (`A ⊵ 0`) if it maps the cone into
//! itself, *improves positivity* (`A ⊳ 0`) if it maps every nonzero cone
//! element to a strictly positive one, and is *ergodic* if for any two
//! nonzero cone elements some power `Aⁿ`, `n ≥ 0`, pairs them strictly
//! positively.
//!
//! On the orthant all three relations are exact entrywise/graph predicates.
//! On the PSD cone the sandwich form `ξ ↦ A*ξA` is positivity preserving by
//! construction; any other superoperator is tested against a deterministic
//! probe set of rank-one inputs. The probe test is a necessary condition
//! only: a `false` is a genuine counterexample, a `true` is evidence.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_deviation, hermitian_eigen, max_abs, max_abs_complex, min_eigenvalue, CMatrix, RMatrix, RVector,
};
use crate::rng;
#[allow(unused_imports)]
use num_traits::Float;

/// Number of seeded random unit vectors appended to the PSD probe set.
pub const DEFAULT_RANDOM_PROBES: usize = 64;

/// Above this many index pairs the pair probes are a seeded sample of
/// this size instead of all pairs.
pub const MAX_PAIR_PROBES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Orthant,
    PsdHilbertSchmidt,
}

/// Which self-dual cone an element or map is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeDescriptor {
    pub kind: ConeKind,
    /// Vector length for the orthant; matrix side `n` for the PSD cone.
    pub ambient_dim: usize,
    /// Absolute tolerance on entries/eigenvalues, scaled by the max-norm of
    /// the object under test whenever that norm exceeds one.
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeElement {
    Vector(RVector),
    Matrix(CMatrix),
}

/// Action of a superoperator on Hilbert–Schmidt space, for maps too large
/// or too structured to store as an `n² × n²` matrix.
pub trait HsAction: Send + Sync {
    fn side(&self) -> usize;
    fn apply(&self, xi: &CMatrix) -> CMatrix;
}

pub enum ConeMap {
    /// `N × N` matrix acting on the orthant's ambient space.
    Matrix(RMatrix),
    /// `ξ ↦ A* ξ A` with the stored `A`.
    Sandwich(CMatrix),
    /// `n² × n²` matrix acting on row-major vectorizations (`hs_unpack`).
    Superoperator(CMatrix),
    Action(Box<dyn HsAction>),
}

impl core::fmt::Debug for ConeMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConeMap::Matrix(m) => write!(f, "ConeMap::Matrix({}x{})", m.nrows(), m.ncols()),
            ConeMap::Sandwich(a) => write!(f, "ConeMap::Sandwich({}x{})", a.nrows(), a.ncols()),
            ConeMap::Superoperator(s) => {
                write!(f, "ConeMap::Superoperator({}x{})", s.nrows(), s.ncols())
            }
            ConeMap::Action(a) => write!(f, "ConeMap::Action(side {})", a.side()),
        }
    }
}

/// Outcome of running a superoperator over the PSD probe set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeCertificate {
    pub probes: usize,
    /// Smallest eigenvalue over all probe outputs, each divided by
    /// `max(1, ‖output‖_max)`.
    pub worst_min_eigenvalue: f64,
    pub worst_hermitian_deviation: f64,
}

impl ConeElement {
    /// Orthant element from a complex vector that must be real.
    pub fn from_complex_vector(v: &[Complex64], tol: f64) -> Result<Self> {
        let residue = v.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
        let scale = v.iter().fold(1.0_f64, |acc, z| acc.max(z.re.abs()));
        if residue > tol * scale {
            return Err(Error::NotReal { residue });
        }
        Ok(ConeElement::Vector(RVector::from_iterator(
            v.len(),
            v.iter().map(|z| z.re),
        )))
    }

    pub fn max_norm(&self) -> f64 {
        match self {
            ConeElement::Vector(v) => v.iter().fold(0.0, |acc, x| acc.max(x.abs())),
            ConeElement::Matrix(m) => max_abs_complex(m),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            ConeElement::Vector(v) => v.norm(),
            ConeElement::Matrix(m) => m.norm(),
        }
    }
}

impl ConeDescriptor {
    pub const DEFAULT_TOL: f64 = 1e-10;

    pub fn new(kind: ConeKind, ambient_dim: usize, tol: f64) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidParameter("cone ambient_dim must be >= 1".into()));
        }
        if !(tol >= 0.0) {
            return Err(Error::InvalidParameter("cone tolerance must be >= 0".into()));
        }
        Ok(Self { kind, ambient_dim, tol })
    }

    pub fn orthant(n: usize) -> Self {
        Self {
            kind: ConeKind::Orthant,
            ambient_dim: n.max(1),
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn psd(side: usize) -> Self {
        Self {
            kind: ConeKind::PsdHilbertSchmidt,
            ambient_dim: side.max(1),
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol.max(0.0);
        self
    }

    fn scaled_tol(&self, scale: f64) -> f64 {
        self.tol * scale.max(1.0)
    }

    fn check_shape(&self, x: &ConeElement) -> Result<()> {
        match (self.kind, x) {
            (ConeKind::Orthant, ConeElement::Vector(v)) if v.len() == self.ambient_dim => Ok(()),
            (ConeKind::PsdHilbertSchmidt, ConeElement::Matrix(m))
                if m.nrows() == self.ambient_dim && m.ncols() == self.ambient_dim =>
            {
                Ok(())
            }
            (ConeKind::Orthant, ConeElement::Vector(v)) => Err(Error::ShapeMismatch {
                expected: alloc::format!("vector of length {}", self.ambient_dim),
                found: alloc::format!("length {}", v.len()),
            }),
            (ConeKind::PsdHilbertSchmidt, ConeElement::Matrix(m)) => Err(Error::ShapeMismatch {
                expected: alloc::format!("{0}x{0} matrix", self.ambient_dim),
                found: alloc::format!("{}x{}", m.nrows(), m.ncols()),
            }),
            (ConeKind::Orthant, ConeElement::Matrix(_)) => Err(Error::ConeKind("orthant cone expects a vector")),
            (ConeKind::PsdHilbertSchmidt, ConeElement::Vector(_)) => Err(Error::ConeKind("PSD cone expects a matrix")),
        }
    }

    fn require_hermitian(&self, m: &CMatrix) -> Result<()> {
        let tol = self.scaled_tol(max_abs_complex(m));
        let deviation = hermitian_deviation(m);
        if deviation > tol {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        Ok(())
    }

    /// Real part of `⟨x|y⟩` (trace pairing for matrices).
    pub fn pairing(&self, x: &ConeElement, y: &ConeElement) -> Result<f64> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        Ok(match (x, y) {
            (ConeElement::Vector(a), ConeElement::Vector(b)) => a.dot(b),
            (ConeElement::Matrix(a), ConeElement::Matrix(b)) => {
                a.iter().zip(b.iter()).map(|(u, v)| (u.conj() * v).re).sum()
            }
            _ => unreachable!("shapes checked"),
        })
    }

    pub fn is_in_cone(&self, x: &ConeElement) -> Result<bool> {
        self.check_shape(x)?;
        let tol = self.scaled_tol(x.max_norm());
        match x {
            ConeElement::Vector(v) => Ok(v.iter().all(|&e| e >= -tol)),
            ConeElement::Matrix(m) => {
                self.require_hermitian(m)?;
                Ok(min_eigenvalue(&hermitianize(m)) >= -tol)
            }
        }
    }

    /// `x = x₊ − x₋` with `x± ` in the cone and `⟨x₊|x₋⟩ = 0`.
    pub fn decompose(&self, x: &ConeElement) -> Result<(ConeElement, ConeElement)> {
        self.check_shape(x)?;
        match x {
            ConeElement::Vector(v) => Ok((
                ConeElement::Vector(v.map(|e| e.max(0.0))),
                ConeElement::Vector(v.map(|e| (-e).max(0.0))),
            )),
            ConeElement::Matrix(m) => {
                self.require_hermitian(m)?;
                let (values, vectors) = hermitian_eigen(&hermitianize(m));
                let part = |f: &dyn Fn(f64) -> f64| {
                    let mut scaled = vectors.clone();
                    for (j, &lambda) in values.iter().enumerate() {
                        scaled.column_mut(j).scale_mut(f(lambda));
                    }
                    &scaled * vectors.adjoint()
                };
                let plus = part(&|l| l.max(0.0));
                let minus = part(&|l| (-l).max(0.0));
                Ok((ConeElement::Matrix(plus), ConeElement::Matrix(minus)))
            }
        }
    }

    pub fn is_strictly_positive(&self, x: &ConeElement) -> Result<bool> {
        self.check_shape(x)?;
        let tol = self.scaled_tol(x.max_norm());
        match x {
            ConeElement::Vector(v) => Ok(v.iter().all(|&e| e > tol)),
            ConeElement::Matrix(m) => {
                if hermitian_deviation(m) > tol {
                    return Ok(false);
                }
                Ok(min_eigenvalue(&hermitianize(m)) > tol)
            }
        }
    }

    fn check_map(&self, map: &ConeMap) -> Result<()> {
        let n = self.ambient_dim;
        let ok = match (self.kind, map) {
            (ConeKind::Orthant, ConeMap::Matrix(m)) => m.nrows() == n && m.ncols() == n,
            (ConeKind::PsdHilbertSchmidt, ConeMap::Sandwich(a)) => a.nrows() == n && a.ncols() == n,
            (ConeKind::PsdHilbertSchmidt, ConeMap::Superoperator(s)) => s.nrows() == n * n && s.ncols() == n * n,
            (ConeKind::PsdHilbertSchmidt, ConeMap::Action(a)) => a.side() == n,
            (ConeKind::Orthant, _) => return Err(Error::ConeKind("orthant maps are matrices")),
            (ConeKind::PsdHilbertSchmidt, ConeMap::Matrix(_)) => {
                return Err(Error::ConeKind("PSD cone maps are superoperators"))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: alloc::format!("map on ambient dimension {n}"),
                found: alloc::format!("{map:?}"),
            })
        }
    }

    /// `A ⊵ 0`. Exact on the orthant and for sandwich maps; a probe-set
    /// certificate (necessary condition) for other PSD superoperators.
    pub fn preserves_positivity(&self, map: &ConeMap) -> Result<bool> {
        self.check_map(map)?;
        match map {
            ConeMap::Matrix(m) => {
                let tol = self.scaled_tol(max_abs(m));
                Ok(m.iter().all(|&e| e >= -tol))
            }
            ConeMap::Sandwich(_) => Ok(true),
            _ => {
                let cert = self.probe_certificate(map, DEFAULT_RANDOM_PROBES, 0)?;
                Ok(cert.worst_min_eigenvalue >= -self.tol && cert.worst_hermitian_deviation <= self.tol)
            }
        }
    }

    /// `A ⊳ 0`. Exact on the orthant; probe-set certificate on the PSD cone.
    pub fn improves_positivity(&self, map: &ConeMap) -> Result<bool> {
        self.check_map(map)?;
        match map {
            ConeMap::Matrix(m) => {
                let tol = self.scaled_tol(max_abs(m));
                Ok(m.iter().all(|&e| e > tol))
            }
            _ => {
                let cert = self.probe_certificate(map, DEFAULT_RANDOM_PROBES, 0)?;
                Ok(cert.worst_min_eigenvalue > self.tol && cert.worst_hermitian_deviation <= self.tol)
            }
        }
    }

    /// Ergodicity of an entrywise-nonnegative matrix on the orthant: every
    /// basis pair `(i, j)` has `(Mⁿ)ᵢⱼ > 0` for some `n ∈ {0, …, N−1}`.
    pub fn is_ergodic(&self, map: &ConeMap) -> Result<bool> {
        if self.kind != ConeKind::Orthant {
            return Err(Error::ConeKind("ergodicity is implemented for the orthant only"));
        }
        self.check_map(map)?;
        let ConeMap::Matrix(m) = map else {
            unreachable!("checked by check_map")
        };
        let tol = self.scaled_tol(max_abs(m));
        if let Some(&worst) = m.iter().find(|&&e| e < -tol) {
            return Err(Error::NotPositivityPreserving {
                value: worst,
                tolerance: tol,
            });
        }
        let reach = reachability(m, tol);
        Ok(reach.iter().all(|row| row.iter().all(|&r| r)))
    }

    /// Run a PSD-cone superoperator over the probe set: all standard basis
    /// vectors, `eᵢ + eⱼ` and `eᵢ + i·eⱼ` for all pairs `i < j` (a seeded
    /// sample of [`MAX_PAIR_PROBES`] pairs when there are more), and
    /// `random` seeded unit vectors.
    pub fn probe_certificate(&self, map: &ConeMap, random: usize, seed: u64) -> Result<ProbeCertificate> {
        if self.kind != ConeKind::PsdHilbertSchmidt {
            return Err(Error::ConeKind("probe certificates are for the PSD cone"));
        }
        self.check_map(map)?;
        let n = self.ambient_dim;
        let mut worst_eig = f64::INFINITY;
        let mut worst_dev = 0.0_f64;
        let mut count = 0usize;
        let mut run = |v: &[Complex64]| {
            let xi = CMatrix::from_fn(n, n, |a, b| v[a] * v[b].conj());
            let out = apply_map(map, &xi);
            let scale = max_abs_complex(&out).max(1.0);
            worst_dev = worst_dev.max(hermitian_deviation(&out) / scale);
            worst_eig = worst_eig.min(min_eigenvalue(&hermitianize(&out)) / scale);
            count += 1;
        };
        let zero = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut v = vec![zero; n];
            v[i] = Complex64::new(1.0, 0.0);
            run(&v);
        }
        let mut rng = rng::seeded(seed);
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        if pairs.len() > MAX_PAIR_PROBES {
            for k in 0..MAX_PAIR_PROBES {
                let pick =
                    k + (rng::uniform(&mut rng, 0.0, (pairs.len() - k) as f64) as usize).min(pairs.len() - k - 1);
                pairs.swap(k, pick);
            }
            pairs.truncate(MAX_PAIR_PROBES);
        }
        for (i, j) in pairs {
            let mut v = vec![zero; n];
            v[i] = Complex64::new(1.0, 0.0);
            v[j] = Complex64::new(1.0, 0.0);
            run(&v);
            v[j] = Complex64::new(0.0, 1.0);
            run(&v);
        }
        for _ in 0..random {
            let mut v: Vec<Complex64> = (0..n).map(|_| rng::complex_normal(&mut rng)).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            run(&v);
        }
        Ok(ProbeCertificate {
            probes: count,
            worst_min_eigenvalue: worst_eig,
            worst_hermitian_deviation: worst_dev,
        })
    }
}

/// Apply a PSD-cone map to a matrix.
pub fn apply_map(map: &ConeMap, xi: &CMatrix) -> CMatrix {
    match map {
        ConeMap::Sandwich(a) => a.adjoint() * xi * a,
        ConeMap::Superoperator(s) => {
            let v = CMatrix::from_column_slice(xi.len(), 1, &hs_unpack(xi));
            let out = s * v;
            hs_pack(out.as_slice()).expect("superoperator preserves length")
        }
        ConeMap::Action(a) => a.apply(xi),
        ConeMap::Matrix(_) => panic!("orthant matrix applied as a superoperator"),
    }
}

/// Reachability closure of the support digraph (edge `j → i` when
/// `Mᵢⱼ > tol`) with a self-loop at every node.
pub fn reachability(m: &RMatrix, tol: f64) -> Vec<Vec<bool>> {
    let n = m.nrows();
    let mut reach = vec![vec![false; n]; n];
    let mut queue = VecDeque::new();
    for (source, row) in reach.iter_mut().enumerate() {
        // row[target]: target reachable from source.
        row[source] = true;
        queue.clear();
        queue.push_back(source);
        while let Some(j) = queue.pop_front() {
            for i in 0..n {
                if !row[i] && m[(i, j)] > tol {
                    row[i] = true;
                    queue.push_back(i);
                }
            }
        }
    }
    reach
}

/// Row-major reshape of a length-`n²` vector into an `n × n` matrix, so
/// that `u ⊗ v̄` becomes `|u⟩⟨v|`.
pub fn hs_pack(v: &[Complex64]) -> Result<CMatrix> {
    let n = perfect_sqrt(v.len()).ok_or(Error::NotPerfectSquare(v.len()))?;
    Ok(CMatrix::from_fn(n, n, |a, b| v[a * n + b]))
}

/// Inverse of [`hs_pack`].
pub fn hs_unpack(m: &CMatrix) -> Vec<Complex64> {
    let (rows, cols) = m.shape();
    let mut out = Vec::with_capacity(rows * cols);
    for a in 0..rows {
        for b in 0..cols {
            out.push(m[(a, b)]);
        }
    }
    out
}

pub(crate) fn perfect_sqrt(len: usize) -> Option<usize> {
    let r = (len as f64).sqrt().round() as usize;
    (r * r == len).then_some(r)
}

pub(crate) fn hermitianize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_complex;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut r = rng::seeded(seed);
        let a = CMatrix::from_fn(n, n, |_, _| rng::complex_normal(&mut r));
        hermitianize(&a)
    }

    #[test]
    fn orthant_membership_examples() {
        let cone = ConeDescriptor::orthant(3);
        let x = ConeElement::Vector(RVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert!(cone.is_in_cone(&x).unwrap());
        let zero = ConeElement::Vector(RVector::zeros(3));
        assert!(cone.is_in_cone(&zero).unwrap());
    }

    #[test]
    fn psd_membership_examples() {
        let cone = ConeDescriptor::psd(2);
        let x = ConeElement::Matrix(CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(1.0)]));
        assert!(!cone.is_in_cone(&x).unwrap());
        let zero = ConeElement::Matrix(CMatrix::zeros(2, 2));
        assert!(cone.is_in_cone(&zero).unwrap());
    }

    #[test]
    fn membership_errors() {
        let cone = ConeDescriptor::orthant(3);
        let x = ConeElement::Vector(RVector::zeros(2));
        assert!(matches!(cone.is_in_cone(&x), Err(Error::ShapeMismatch { .. })));
        let psd = ConeDescriptor::psd(2);
        let skew = ConeElement::Matrix(CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]));
        assert!(matches!(psd.is_in_cone(&skew), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            ConeElement::from_complex_vector(&[Complex64::new(1.0, 0.5)], 1e-10),
            Err(Error::NotReal { .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let cone = ConeDescriptor::orthant(2);
        let x = ConeElement::Vector(RVector::from_vec(vec![1.0, -2.0]));
        let (p, m) = cone.decompose(&x).unwrap();
        assert_eq!(p, ConeElement::Vector(RVector::from_vec(vec![1.0, 0.0])));
        assert_eq!(m, ConeElement::Vector(RVector::from_vec(vec![0.0, 2.0])));

        let psd = ConeDescriptor::psd(2);
        let d = ConeElement::Matrix(CMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(-3.0)]));
        let (ConeElement::Matrix(p), ConeElement::Matrix(m)) = psd.decompose(&d).unwrap() else {
            panic!()
        };
        let want_p = CMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(0.0)]);
        let want_m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(3.0)]);
        assert!(max_abs_complex(&(p - want_p)) < 1e-14);
        assert!(max_abs_complex(&(m - want_m)) < 1e-14);
    }

    #[test]
    fn decompose_random_hermitian_against_eigen_oracle() {
        let psd = ConeDescriptor::psd(4);
        for seed in 0..20 {
            let h = random_hermitian(4, seed);
            let x = ConeElement::Matrix(h.clone());
            let (p, m) = psd.decompose(&x).unwrap();
            let (ConeElement::Matrix(pm), ConeElement::Matrix(mm)) = (&p, &m) else {
                panic!()
            };
            assert!((pm - mm - &h).norm() <= 1e-10 * h.norm());
            assert!(psd.is_in_cone(&p).unwrap() && psd.is_in_cone(&m).unwrap());
            assert!(psd.pairing(&p, &m).unwrap().abs() <= 1e-10 * h.norm_squared());
            // Positive part's spectrum equals the clamped spectrum of h.
            let (vals, _) = hermitian_eigen(&h);
            let (pvals, _) = hermitian_eigen(pm);
            let mut clamped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
            clamped.sort_by(f64::total_cmp);
            for (a, b) in clamped.iter().zip(&pvals) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn strict_positivity_examples() {
        let cone = ConeDescriptor::orthant(2);
        let x = ConeElement::Vector(RVector::from_vec(vec![1.0, 1e-3]));
        assert!(cone.is_strictly_positive(&x).unwrap());
        let y = ConeElement::Vector(RVector::from_vec(vec![1.0, 0.0]));
        assert!(!cone.is_strictly_positive(&y).unwrap());
        let psd = ConeDescriptor::psd(3);
        assert!(psd
            .is_strictly_positive(&ConeElement::Matrix(CMatrix::identity(3, 3)))
            .unwrap());
    }

    #[test]
    fn orthant_map_relations() {
        let cone = ConeDescriptor::orthant(3);
        let nonneg = RMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 * 0.1);
        assert!(cone.preserves_positivity(&ConeMap::Matrix(nonneg.clone())).unwrap());
        let mut neg = nonneg;
        neg[(1, 2)] = -0.5;
        assert!(!cone.preserves_positivity(&ConeMap::Matrix(neg)).unwrap());
        let ones = RMatrix::from_element(3, 3, 1.0);
        assert!(cone.improves_positivity(&ConeMap::Matrix(ones)).unwrap());
        assert!(!cone
            .improves_positivity(&ConeMap::Matrix(RMatrix::identity(3, 3)))
            .unwrap());
    }

    #[test]
    fn sandwich_maps_preserve_psd() {
        let n = 4;
        let psd = ConeDescriptor::psd(n);
        let mut r = rng::seeded(7);
        let a = CMatrix::from_fn(n, n, |_, _| rng::complex_normal(&mut r));
        let map = ConeMap::Sandwich(a.clone());
        assert!(psd.preserves_positivity(&map).unwrap());
        // The same map written as a superoperator passes the probe test.
        let superop = crate::linalg::kron(&a.adjoint(), &a.transpose());
        let cert = psd.probe_certificate(&ConeMap::Superoperator(superop), 16, 3).unwrap();
        assert!(cert.worst_min_eigenvalue >= -1e-10, "{cert:?}");
        assert_eq!(cert.probes, n + n * (n - 1) + 16);
    }

    #[test]
    fn transpose_map_fails_probe_certificate() {
        // Transposition preserves PSD matrices (it is positive but not
        // completely positive); the negated map must fail.
        let n = 3;
        let psd = ConeDescriptor::psd(n);
        let transpose = CMatrix::from_fn(n * n, n * n, |r, s| {
            let (a, b) = (r / n, r % n);
            if s == b * n + a {
                c(1.0)
            } else {
                c(0.0)
            }
        });
        assert!(psd
            .preserves_positivity(&ConeMap::Superoperator(transpose.clone()))
            .unwrap());
        assert!(!psd.preserves_positivity(&ConeMap::Superoperator(-transpose)).unwrap());
    }

    #[test]
    fn ergodicity_examples() {
        let n = 5;
        let cone = ConeDescriptor::orthant(n);
        let shift = RMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { 1.0 } else { 0.0 });
        assert!(cone.is_ergodic(&ConeMap::Matrix(shift)).unwrap());
        assert!(!cone.is_ergodic(&ConeMap::Matrix(RMatrix::identity(n, n))).unwrap());
        assert!(cone
            .is_ergodic(&ConeMap::Matrix(RMatrix::from_element(n, n, 1.0)))
            .unwrap());
        let mut bad = RMatrix::identity(n, n);
        bad[(0, 1)] = -1.0;
        assert!(matches!(
            cone.is_ergodic(&ConeMap::Matrix(bad)),
            Err(Error::NotPositivityPreserving { .. })
        ));
        assert!(ConeDescriptor::psd(2)
            .is_ergodic(&ConeMap::Sandwich(CMatrix::identity(2, 2)))
            .is_err());
    }

    #[test]
    fn ergodicity_matches_boolean_power_oracle() {
        // Boolean powers 0..N-1, independent of the BFS closure.
        fn oracle(m: &RMatrix) -> bool {
            let n = m.nrows();
            let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] > 0.0).collect()).collect();
            let mut power: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
            let mut seen = power.clone();
            for _ in 1..n {
                let next: Vec<Vec<bool>> = (0..n)
                    .map(|i| (0..n).map(|j| (0..n).any(|k| adj[i][k] && power[k][j])).collect())
                    .collect();
                for i in 0..n {
                    for j in 0..n {
                        seen[i][j] |= next[i][j];
                    }
                }
                power = next;
            }
            seen.iter().all(|r| r.iter().all(|&b| b))
        }
        let mut r = rng::seeded(11);
        for trial in 0..200 {
            let n = 2 + trial % 7;
            let density = 0.1 + 0.3 * (trial % 3) as f64;
            let m = RMatrix::from_fn(n, n, |_, _| {
                if rng::uniform(&mut r, 0.0, 1.0) < density {
                    rng::uniform(&mut r, 0.1, 1.0)
                } else {
                    0.0
                }
            });
            let cone = ConeDescriptor::orthant(n);
            assert_eq!(cone.is_ergodic(&ConeMap::Matrix(m.clone())).unwrap(), oracle(&m));
        }
    }

    #[test]
    fn hs_pack_rank_one_and_isometry() {
        let u = [c(1.0), Complex64::new(0.0, 2.0)];
        let v = [Complex64::new(3.0, 1.0), c(-1.0)];
        let kron: Vec<Complex64> = u.iter().flat_map(|a| v.iter().map(move |b| a * b.conj())).collect();
        let m = hs_pack(&kron).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(m[(a, b)], u[a] * v[b].conj());
            }
        }
        assert_eq!(hs_unpack(&m), kron);
        assert!(matches!(hs_pack(&[c(1.0); 5]), Err(Error::NotPerfectSquare(5))));

        let mut r = rng::seeded(5);
        for _ in 0..20 {
            let x: Vec<Complex64> = (0..16).map(|_| rng::complex_normal(&mut r)).collect();
            let y: Vec<Complex64> = (0..16).map(|_| rng::complex_normal(&mut r)).collect();
            let direct: Complex64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
            let (px, py) = (hs_pack(&x).unwrap(), hs_pack(&y).unwrap());
            let hs = (px.adjoint() * py).trace();
            assert!((direct - hs).norm() < 1e-12);
        }
    }

    #[test]
    fn real_matrix_helpers_agree() {
        let m = RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let psd = ConeDescriptor::psd(2);
        assert!(!psd.is_in_cone(&ConeElement::Matrix(to_complex(&m))).unwrap());
    }
}
