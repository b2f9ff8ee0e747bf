//! Dense linear-algebra helpers shared by the cone calculus and the spectral
//! engine.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub type RMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex64>;
pub type RVector = DVector<f64>;

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: RMatrix,
}

impl Eigensystem {
    pub fn new(matrix: &RMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(shape_error(matrix.nrows(), matrix.ncols()));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = eig.eigenvectors.select_columns(order.iter());
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `U · diag(f(λ)) · Uᵀ`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> RMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(j).scale_mut(w);
        }
        &scaled * self.vectors.transpose()
    }

    /// Largest absolute eigenvalue (operator norm of a symmetric matrix).
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eigen(matrix: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    (values, eig.eigenvectors.select_columns(order.iter()))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(matrix: &CMatrix) -> f64 {
    matrix
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v))
}

pub fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_complex(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

pub fn min_entry(m: &RMatrix) -> f64 {
    m.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
}

/// Largest singular value.
pub fn spectral_norm(m: &RMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().fold(0.0, |acc, &v| acc.max(v))
}

/// Max-entry deviation from Hermitian symmetry.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn symmetric_deviation(m: &RMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn kron<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T>
where
    T: nalgebra::Scalar + core::ops::Mul<Output = T> + Copy,
{
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `exp(t·A)` for a Metzler matrix `A` (nonnegative off-diagonal entries).
///
/// Writes `tA = M − sI` with `M ≥ 0` entrywise, sums the Taylor series of
/// `M / 2ᵏ` and squares back. Every intermediate quantity is a sum of
/// nonnegative terms, so tiny entries are computed to relative accuracy and
/// structural zeros stay exactly zero. Off-diagonal entries in
/// `[−tol·max|A|, 0)` are treated as rounding noise and clamped to zero.
pub fn metzler_expm(a: &RMatrix, t: f64, tol: f64) -> Result<RMatrix> {
    if !a.is_square() {
        return Err(shape_error(a.nrows(), a.ncols()));
    }
    if t < 0.0 {
        return Err(Error::NegativeBeta(t));
    }
    let n = a.nrows();
    let scale = max_abs(a);
    let mut m = a * t;
    let mut shift = 0.0_f64;
    for i in 0..n {
        shift = shift.max(-m[(i, i)]);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                m[(i, i)] += shift;
            } else if m[(i, j)] < 0.0 {
                if m[(i, j)] < -tol * scale * t {
                    return Err(Error::NotPositivityPreserving {
                        value: a[(i, j)],
                        tolerance: tol * scale,
                    });
                }
                m[(i, j)] = 0.0;
            }
        }
    }
    let norm1 = (0..n).map(|j| m.column(j).iter().sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm1 / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let step = 2f64.powi(squarings as i32);
    let base = &m / step;
    let mut term = RMatrix::identity(n, n);
    let mut sum = RMatrix::identity(n, n);
    for k in 1..64 {
        term = &term * &base / k as f64;
        sum += &term;
        if max_abs(&term) <= f64::EPSILON * 1e-3 * max_abs(&sum) {
            break;
        }
    }
    sum *= (-shift / step).exp();
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

pub(crate) fn shape_error(rows: usize, cols: usize) -> Error {
    Error::ShapeMismatch {
        expected: "square matrix".into(),
        found: alloc::format!("{rows}x{cols}"),
    }
}
