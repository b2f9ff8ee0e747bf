//! Matrix-free Lanczos iteration for the bottom of the spectrum of a real
//! symmetric operator.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::{RMatrix, RVector};
#[allow(unused_imports)]
use num_traits::Float;

/// A real symmetric linear operator known only through its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

impl LinearOperator for RMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let y = self * RVector::from_column_slice(x);
        out.copy_from_slice(y.as_slice());
    }
}

/// Lowest Ritz pairs returned by [`lowest_eigenpairs`].
#[derive(Debug, Clone)]
pub struct RitzPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖A v − θ v‖` for each returned pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Lanczos with full reorthogonalization. Returns the `count` lowest Ritz
/// pairs once every residual is below `tol · ‖A‖` (estimated by the largest
/// Ritz value magnitude), or an error after `max_iter` steps.
pub fn lowest_eigenpairs(
    op: &dyn LinearOperator,
    start: &[f64],
    count: usize,
    max_iter: usize,
    tol: f64,
) -> Result<RitzPairs> {
    let n = op.dim();
    if start.len() != n {
        return Err(Error::ShapeMismatch {
            expected: alloc::format!("start vector of length {n}"),
            found: alloc::format!("{}", start.len()),
        });
    }
    let count = count.min(n).max(1);
    let max_iter = max_iter.min(n).max(count);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    let mut q = start.to_vec();
    let norm = dot(&q, &q).sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("zero Lanczos start vector".into()));
    }
    q.iter_mut().for_each(|v| *v /= norm);
    let mut w = vec![0.0; n];

    for k in 0..max_iter {
        op.apply(&q, &mut w);
        let a = dot(&q, &w);
        alpha.push(a);
        basis.push(q.clone());
        // Full reorthogonalization, twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let b = dot(&w, &w).sqrt();

        let m = alpha.len();
        let exhausted = b <= 1e-14;
        if m >= count && (exhausted || k + 1 == max_iter || m.is_multiple_of(5)) {
            let Ritz {
                values,
                coeffs,
                anorm,
                vectors,
            } = ritz_pairs(&alpha, &beta, &basis, count);
            let estimate = coeffs.iter().fold(0.0_f64, |acc, y| acc.max((b * y[m - 1]).abs()));
            if exhausted || estimate <= tol * anorm.max(1.0) {
                let residuals = vectors
                    .iter()
                    .zip(&values)
                    .map(|(v, &theta)| {
                        let mut av = vec![0.0; n];
                        op.apply(v, &mut av);
                        axpy(-theta, v, &mut av);
                        dot(&av, &av).sqrt()
                    })
                    .collect();
                return Ok(RitzPairs {
                    values,
                    vectors,
                    residuals,
                    iterations: m,
                });
            }
            if k + 1 == max_iter {
                return Err(Error::NoConvergence(alloc::format!(
                    "Lanczos residual estimate {estimate:e} after {m} steps"
                )));
            }
        }
        if b <= 1e-14 {
            break;
        }
        beta.push(b);
        q = w.iter().map(|v| v / b).collect();
    }
    Err(Error::NoConvergence("Lanczos basis exhausted".into()))
}

struct Ritz {
    values: Vec<f64>,
    /// Tridiagonal eigenvector coefficients.
    coeffs: Vec<Vec<f64>>,
    /// Largest Ritz value in magnitude, a norm estimate.
    anorm: f64,
    vectors: Vec<Vec<f64>>,
}

/// The `count` lowest Ritz pairs.
fn ritz_pairs(alpha: &[f64], beta: &[f64], basis: &[Vec<f64>], count: usize) -> Ritz {
    let m = alpha.len();
    let t = RMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let anorm = eig.eigenvalues.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let n = basis[0].len();
    let mut values = Vec::new();
    let mut coeffs = Vec::new();
    let mut vectors = Vec::new();
    for &idx in order.iter().take(count) {
        values.push(eig.eigenvalues[idx]);
        let y: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let mut v = vec![0.0; n];
        for (coef, b) in y.iter().zip(basis) {
            axpy(*coef, b, &mut v);
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        coeffs.push(y);
        vectors.push(v);
    }
    Ritz {
        values,
        coeffs,
        anorm,
        vectors,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Eigensystem;

    #[test]
    fn matches_dense_on_path_laplacian() {
        let n = 40;
        let m = RMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0 + 0.01 * i as f64
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let dense = Eigensystem::new(&m).unwrap();
        let start = vec![1.0; n];
        let ritz = lowest_eigenpairs(&m, &start, 2, n, 1e-10).unwrap();
        assert!((ritz.values[0] - dense.values[0]).abs() < 1e-9);
        assert!((ritz.values[1] - dense.values[1]).abs() < 1e-9);
        assert!(ritz.residuals[0] < 1e-8);
    }
}
