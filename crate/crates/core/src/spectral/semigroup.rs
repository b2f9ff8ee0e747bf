use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, metzler_expm, spectral_norm, Eigensystem, RMatrix};

use super::model::LatticeModel;
#[allow(unused_imports)]
use num_traits::Float;

/// How `e^{−βH}` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupMethod {
    /// `U diag(e^{−βλ}) Uᵀ` from the cached eigendecomposition.
    Eigen,
    /// `(e^{−βK/s} e^{βV/s})ˢ`.
    Trotter { steps: usize },
    /// Scaled Taylor series of the Metzler matrix `−β(H − E₀)`. Every term is
    /// entrywise nonnegative, so tiny positive entries keep full relative
    /// accuracy. Requires nonpositive off-diagonal entries of `H` in the
    /// working basis.
    Metzler,
}

/// Basis in which a semigroup is returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Position,
    Momentum,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::NegativeBeta(beta));
    }
    Ok(())
}

impl LatticeModel {
    /// `e^{−β(H − E₀)}` in the position basis.
    ///
    /// The shift by the ground energy keeps the largest eigenvalue at one;
    /// it multiplies the semigroup by a positive constant and so changes no
    /// cone relation.
    pub fn semigroup(&self, beta: f64, method: SemigroupMethod) -> Result<RMatrix> {
        self.semigroup_in(beta, method, Basis::Position)
    }

    pub fn semigroup_in(&self, beta: f64, method: SemigroupMethod, basis: Basis) -> Result<RMatrix> {
        check_beta(beta)?;
        let e0 = self.ground_energy();
        let n = self.dim();
        if beta == 0.0 {
            return Ok(RMatrix::identity(n, n));
        }
        match (method, basis) {
            (SemigroupMethod::Eigen, Basis::Position) => Ok(self.apply_spectral(|l| (-beta * (l - e0)).exp())),
            (SemigroupMethod::Metzler, _) => {
                let mut h = match basis {
                    Basis::Position => self.hamiltonian.matrix.clone(),
                    Basis::Momentum => self.hamiltonian.momentum_matrix(),
                };
                for i in 0..n {
                    h[(i, i)] -= e0;
                }
                metzler_expm(&(-h), beta, 1e-12)
            }
            (SemigroupMethod::Trotter { steps }, Basis::Position) => {
                let k = self.hamiltonian.kinetic_matrix()?;
                let mut v = self.hamiltonian.potential_matrix();
                for i in 0..n {
                    v[(i, i)] += e0;
                }
                trotter_product(&k, &v, beta, steps)
            }
            (_, Basis::Momentum) => Err(Error::InvalidParameter(
                "momentum-basis semigroups use the Metzler method".into(),
            )),
        }
    }
}

/// `(e^{−βK/s} · e^{+βV/s})ˢ` for symmetric `K`, `V`; approximates
/// `e^{−β(K − V)}` with error `O(1/s)`.
pub fn trotter_product(k: &RMatrix, v: &RMatrix, beta: f64, steps: usize) -> Result<RMatrix> {
    check_beta(beta)?;
    if steps == 0 {
        return Err(Error::InvalidParameter("Trotter steps must be >= 1".into()));
    }
    if k.shape() != v.shape() || !k.is_square() {
        return Err(Error::ShapeMismatch {
            expected: alloc::format!("two square matrices of shape {:?}", k.shape()),
            found: alloc::format!("{:?}", v.shape()),
        });
    }
    let tau = beta / steps as f64;
    let ek = Eigensystem::new(k)?.apply_fn(|l| (-tau * l).exp());
    let ev = if is_diagonal(v) {
        RMatrix::from_fn(
            v.nrows(),
            v.ncols(),
            |i, j| {
                if i == j {
                    (tau * v[(i, i)]).exp()
                } else {
                    0.0
                }
            },
        )
    } else {
        Eigensystem::new(v)?.apply_fn(|l| (tau * l).exp())
    };
    let factor = ek * ev;
    let mut out = RMatrix::identity(k.nrows(), k.ncols());
    let mut base = factor;
    let mut s = steps;
    while s > 0 {
        if s & 1 == 1 {
            out = &out * &base;
        }
        s >>= 1;
        if s > 0 {
            base = &base * &base;
        }
    }
    Ok(out)
}

fn is_diagonal(m: &RMatrix) -> bool {
    m.iter().enumerate().all(|(idx, &x)| {
        let (i, j) = (idx % m.nrows(), idx / m.nrows());
        i == j || x == 0.0
    })
}

/// Terms of the expansion `e^{−β(A−C)} = Σₙ Dₙ(β)` with
/// `D₀(τ) = e^{−τA}` and `Dₙ(τ) = ∫₀^τ Dₙ₋₁(τ − t) C e^{−tA} dt`.
#[derive(Debug, Clone)]
pub struct DuhamelExpansion {
    pub terms: Vec<RMatrix>,
    pub partial_sum: RMatrix,
    /// Richardson estimate of the trapezoid error in `partial_sum`
    /// (max-entry norm), from rerunning with half the points.
    pub quadrature_error: f64,
    /// Per-term Richardson estimates.
    pub term_errors: Vec<f64>,
}

fn duhamel_terms(a: &RMatrix, c: &RMatrix, beta: f64, order: usize, points: usize) -> Result<Vec<RMatrix>> {
    let n = a.nrows();
    let eig = Eigensystem::new(a)?;
    let h = beta / points as f64;
    let exps: Vec<RMatrix> = (0..=points)
        .map(|i| eig.apply_fn(|l| (-(i as f64) * h * l).exp()))
        .collect();
    let ce: Vec<RMatrix> = exps.iter().map(|e| c * e).collect();
    let mut previous = exps.clone();
    let mut terms = Vec::with_capacity(order + 1);
    terms.push(exps[points].clone());
    for _ in 1..=order {
        let mut current = Vec::with_capacity(points + 1);
        current.push(RMatrix::zeros(n, n));
        for m in 1..=points {
            let mut acc = RMatrix::zeros(n, n);
            for i in 0..=m {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                acc += (&previous[m - i] * &ce[i]) * (w * h);
            }
            current.push(acc);
        }
        terms.push(current[points].clone());
        previous = current;
    }
    Ok(terms)
}

/// Duhamel expansion of `e^{−β(A−C)}` through order `order`, each iterated
/// integral by composite trapezoid with `points` intervals per coordinate.
pub fn duhamel_partial_sum(
    a: &RMatrix,
    c: &RMatrix,
    beta: f64,
    order: usize,
    points: usize,
) -> Result<DuhamelExpansion> {
    check_beta(beta)?;
    if points < 2 {
        return Err(Error::InvalidParameter("quadrature_points must be >= 2".into()));
    }
    if a.shape() != c.shape() || !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: alloc::format!("two square matrices of shape {:?}", a.shape()),
            found: alloc::format!("{:?}", c.shape()),
        });
    }
    let fine = duhamel_terms(a, c, beta, order, points)?;
    let coarse = duhamel_terms(a, c, beta, order, points / 2)?;
    let term_errors: Vec<f64> = fine.iter().zip(&coarse).map(|(f, g)| max_abs(&(f - g)) / 3.0).collect();
    let mut partial_sum = RMatrix::zeros(a.nrows(), a.ncols());
    for t in &fine {
        partial_sum += t;
    }
    Ok(DuhamelExpansion {
        quadrature_error: term_errors.iter().sum(),
        terms: fine,
        partial_sum,
        term_errors,
    })
}

/// `e^{β(‖C‖ − λ_min(A))} (β‖C‖)^{K+1} / (K+1)!`, the truncation bound of
/// the Duhamel series after order `K`.
pub fn duhamel_remainder_bound(a: &RMatrix, c: &RMatrix, beta: f64, order: usize) -> Result<f64> {
    let lmin = Eigensystem::new(a)?.values[0];
    let cn = spectral_norm(c);
    let mut tail = 1.0;
    for k in 1..=order + 1 {
        tail *= beta * cn / k as f64;
    }
    Ok((beta * (cn - lmin)).exp() * tail)
}
