use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Scalar;

use crate::error::{Error, Result};
use crate::lattice::Grid;
use crate::linalg::{kron, CMatrix, RMatrix};

/// The change of variables `X₁ = (x₂ − x₁)/2`, `X₂ = (x₂ + x₁)/2` on the
/// doubled lattice, with the division by two done by the inverse of 2
/// modulo `N`.
///
/// Doubled vectors are indexed row-major, `i = j₁·n + j₂` with `n = Nᵈ`,
/// so [`crate::cone::hs_pack`] turns the `X₁` index into the row and `X₂`
/// into the column.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateChange {
    grid: Grid,
    /// `forward[(j₁, j₂)] = (J₁, J₂)`, flattened.
    forward: Vec<usize>,
}

impl CoordinateChange {
    pub fn new(grid: &Grid) -> Result<Self> {
        let big_n = grid.points_per_axis();
        if big_n.is_multiple_of(2) {
            return Err(Error::EvenGridSize(big_n));
        }
        let n = grid.len();
        let h = grid.inverse_of_two();
        let mut forward = vec![0usize; n * n];
        for j1 in 0..n {
            let c1 = grid.centered(j1);
            for j2 in 0..n {
                let c2 = grid.centered(j2);
                let mut x1 = [0i64; 3];
                let mut x2 = [0i64; 3];
                for a in 0..grid.dim() {
                    x1[a] = (c2[a] - c1[a]) * h;
                    x2[a] = (c1[a] + c2[a]) * h;
                }
                forward[j1 * n + j2] = grid.flat(x1) * n + grid.flat(x2);
            }
        }
        Ok(Self { grid: *grid, forward })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Side `n = Nᵈ` of the Hilbert–Schmidt matrices.
    pub fn side(&self) -> usize {
        self.grid.len()
    }

    /// Flat doubled index `(J₁, J₂)` of the node `(j₁, j₂)`.
    pub fn map_index(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn map_pair(&self, j1: usize, j2: usize) -> (usize, usize) {
        let n = self.side();
        let i = self.forward[j1 * n + j2];
        (i / n, i % n)
    }

    /// Pull a doubled vector from `(x₁, x₂)` to `(X₁, X₂)` coordinates.
    pub fn to_new<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut w = vec![T::default(); v.len()];
        for (i, &x) in v.iter().enumerate() {
            w[self.forward[i]] = x;
        }
        w
    }

    /// Inverse of [`CoordinateChange::to_new`].
    pub fn to_old<T: Copy>(&self, w: &[T]) -> Vec<T> {
        self.forward.iter().map(|&i| w[i]).collect()
    }

    /// `ξ` in `(X₁, X₂)` coordinates → the same vector in `(x₁, x₂)`
    /// coordinates, both as `n × n` matrices.
    pub fn matrix_to_old<T: Scalar + Copy>(&self, xi: &nalgebra::DMatrix<T>) -> nalgebra::DMatrix<T> {
        let n = self.side();
        nalgebra::DMatrix::from_fn(n, n, |j1, j2| {
            let i = self.forward[j1 * n + j2];
            xi[(i / n, i % n)]
        })
    }

    pub fn matrix_to_new<T: Scalar + Copy>(&self, v: &nalgebra::DMatrix<T>) -> nalgebra::DMatrix<T> {
        let n = self.side();
        let mut out = v.clone();
        for j1 in 0..n {
            for j2 in 0..n {
                let i = self.forward[j1 * n + j2];
                out[(i / n, i % n)] = v[(j1, j2)];
            }
        }
        out
    }

    /// Dense permutation matrix `P` with `(P v)[(J₁, J₂)] = v[(j₁, j₂)]`.
    pub fn permutation_matrix(&self) -> RMatrix {
        let len = self.forward.len();
        let mut p = RMatrix::zeros(len, len);
        for (i, &j) in self.forward.iter().enumerate() {
            p[(j, i)] = 1.0;
        }
        p
    }
}

/// Which factor of the doubled space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `A ⊗ 1`
    Left,
    /// `1 ⊗ A`
    Right,
    /// `A ⊗ 1 + 1 ⊗ A`
    Sym,
}

/// `A ⊗ 1`, `1 ⊗ A` or `A ⊗ 1 + 1 ⊗ A` as a dense doubled matrix.
pub fn extended_operator(a: &RMatrix, side: Side) -> Result<RMatrix> {
    if !a.is_square() {
        return Err(crate::linalg::shape_error(a.nrows(), a.ncols()));
    }
    let id = RMatrix::identity(a.nrows(), a.ncols());
    Ok(match side {
        Side::Left => kron(a, &id),
        Side::Right => kron(&id, a),
        Side::Sym => kron(a, &id) + kron(&id, a),
    })
}

/// `A ⊗ 1` and `1 ⊗ B` acting on `ξ = hs_pack(v)`: `A ξ Bᵀ`.
pub fn apply_kron(a: &CMatrix, b: &CMatrix, xi: &CMatrix) -> CMatrix {
    a * xi * b.transpose()
}
