use alloc::vec::Vec;

use num_complex::Complex64;

use super::coordinates::CoordinateChange;
use crate::cone::HsAction;
use crate::lattice::Grid;
use crate::linalg::CMatrix;

/// `ξ ↦ W ∘ ξ` (entrywise product): a multiplication operator on the
/// doubled lattice seen in Hilbert–Schmidt space.
#[derive(Debug, Clone)]
pub struct HadamardAction {
    pub weights: CMatrix,
}

impl HsAction for HadamardAction {
    fn side(&self) -> usize {
        self.weights.nrows()
    }

    fn apply(&self, xi: &CMatrix) -> CMatrix {
        self.weights.component_mul(xi)
    }
}

/// `Σᵢ cᵢ Aᵢ ⊗ Bᵢ` given in `(x₁, x₂)` coordinates, acting on matrices in
/// `(X₁, X₂)` coordinates: `ξ ↦ P (Σ cᵢ Aᵢ V Bᵢᵀ) P⁻¹` with `V = P⁻¹ ξ`.
#[derive(Debug, Clone)]
pub struct KronSumAction {
    pub change: CoordinateChange,
    pub terms: Vec<(f64, CMatrix, CMatrix)>,
}

impl HsAction for KronSumAction {
    fn side(&self) -> usize {
        self.change.side()
    }

    fn apply(&self, xi: &CMatrix) -> CMatrix {
        let v = self.change.matrix_to_old(xi);
        let n = self.side();
        let mut out = CMatrix::zeros(n, n);
        for (c, a, b) in &self.terms {
            out += (a * &v * b.transpose()) * Complex64::new(*c, 0.0);
        }
        self.change.matrix_to_new(&out)
    }
}

/// Building block of a shift sandwich: `(Sₜ + S₋ₜ)/2` or
/// `(Sₜ − S₋ₜ)/(2i)`, with `(Sₜ φ)(J) = φ(J + t)`. Both are Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    Cos,
    Sin,
}

/// `ξ ↦ Σᵢ cᵢ Aᵢ ξ Aᵢ` with `Aᵢ` a [`ShiftKind`] operator for shift `tᵢ`.
///
/// With `cᵢ ≥ 0` every summand is the sandwich `ξ ↦ Aᵢ* ξ Aᵢ`; with
/// `cᵢ ≤ 0` it is minus one.
#[derive(Debug, Clone)]
pub struct ShiftSandwichSum {
    pub side: usize,
    pub kind: ShiftKind,
    /// `(cᵢ, J ↦ J + tᵢ, J ↦ J − tᵢ)`.
    pub terms: Vec<(f64, Vec<usize>, Vec<usize>)>,
}

impl ShiftSandwichSum {
    pub fn new(grid: &Grid, kind: ShiftKind, coefficients: &[(f64, usize)]) -> Self {
        let n = grid.len();
        let terms = coefficients
            .iter()
            .map(|&(c, t)| {
                let plus = (0..n).map(|j| grid.combine(j, t, 1)).collect();
                let minus = (0..n).map(|j| grid.combine(j, t, -1)).collect();
                (c, plus, minus)
            })
            .collect();
        Self { side: n, kind, terms }
    }

    /// Dense matrix of the building block for term `i`.
    pub fn block_matrix(&self, i: usize) -> CMatrix {
        let (_, plus, minus) = &self.terms[i];
        let n = self.side;
        let mut m = CMatrix::zeros(n, n);
        let (a, b) = match self.kind {
            ShiftKind::Cos => (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)),
            ShiftKind::Sin => (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)),
        };
        for j in 0..n {
            m[(j, plus[j])] += a;
            m[(j, minus[j])] += b;
        }
        m
    }
}

impl HsAction for ShiftSandwichSum {
    fn side(&self) -> usize {
        self.side
    }

    fn apply(&self, xi: &CMatrix) -> CMatrix {
        let n = self.side;
        // A ξ A [a, b] = ¼ Σ_{σ,τ} w(σ,τ) ξ[a + σt, b − τt] with
        // w ≡ 1 for Cos and w = −στ for Sin.
        let sin = self.kind == ShiftKind::Sin;
        let mut out = CMatrix::zeros(n, n);
        for (c, plus, minus) in &self.terms {
            let q = *c * 0.25;
            for b in 0..n {
                let (bm, bp) = (minus[b], plus[b]);
                for a in 0..n {
                    let (ap, am) = (plus[a], minus[a]);
                    let same = xi[(ap, bm)] + xi[(am, bp)];
                    let cross = xi[(ap, bp)] + xi[(am, bm)];
                    out[(a, b)] += if sin { (cross - same) * q } else { (same + cross) * q };
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_complex;
    use crate::rng;

    #[test]
    fn shift_sum_matches_dense_blocks() {
        let g = Grid::new(1, 7, 2.0).unwrap();
        let terms = [(0.7, g.flat([2, 0, 0])), (1.3, g.flat([-3, 0, 0])), (0.2, g.origin())];
        let mut r = rng::seeded(2);
        let xi = CMatrix::from_fn(7, 7, |_, _| rng::complex_normal(&mut r));
        for kind in [ShiftKind::Cos, ShiftKind::Sin] {
            let s = ShiftSandwichSum::new(&g, kind, &terms);
            let mut want = CMatrix::zeros(7, 7);
            for (i, (c, _)) in terms.iter().enumerate() {
                let a = s.block_matrix(i);
                assert!(max_abs_complex(&(&a - a.adjoint())) < 1e-15);
                want += (&a * &xi * &a) * Complex64::new(*c, 0.0);
            }
            assert!(max_abs_complex(&(s.apply(&xi) - want)) < 1e-12);
        }
    }
}
