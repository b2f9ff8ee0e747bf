use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Fourier, Grid, Kinetic, Potential};
use crate::linalg::{symmetric_deviation, RMatrix};
#[allow(unused_imports)]
use num_traits::Float;

/// `H = −Δ − V` on a periodic grid, stored in the position basis.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub grid: Grid,
    pub potential: Potential,
    pub kinetic: Kinetic,
    /// Real symmetric `Nᵈ × Nᵈ` matrix `F†·diag(ε(p))·F − diag(V)`.
    pub matrix: RMatrix,
}

/// Position-basis matrix of the Fourier multiplier `symbol`, i.e.
/// `F† diag(symbol) F`. The symbol must be even so the result is real.
pub fn multiplier_matrix(grid: &Grid, symbol: &[f64]) -> Result<RMatrix> {
    let fourier = Fourier::new(grid);
    let hat: Vec<Complex64> = symbol.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    // F† diag(s) F [j, j′] = N^{−d/2} (F† s)[j − j′].
    let kernel = fourier.inverse(&hat)?;
    let scale = 1.0 / (grid.len() as f64).sqrt();
    let len = grid.len();
    Ok(RMatrix::from_fn(len, len, |j, jp| {
        scale * kernel[grid.combine(j, jp, -1)].re
    }))
}

impl Hamiltonian {
    pub fn assemble(grid: &Grid, potential: &Potential, kinetic: Kinetic) -> Result<Self> {
        if potential.grid != *grid {
            return Err(Error::GridMismatch(alloc::format!(
                "potential realized on {:?}, Hamiltonian requested on {:?}",
                potential.grid,
                grid
            )));
        }
        let symbol = kinetic_symbol(grid, kinetic);
        let mut matrix = multiplier_matrix(grid, &symbol)?;
        for (j, v) in potential.realized.iter().enumerate() {
            matrix[(j, j)] -= v;
        }
        let dev = symmetric_deviation(&matrix);
        let tol = 1e-10 * crate::linalg::max_abs(&matrix).max(1.0);
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: tol,
            });
        }
        matrix = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self {
            grid: *grid,
            potential: potential.clone(),
            kinetic,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    /// Kinetic symbol `ε(pₖ)` on the momentum nodes.
    pub fn kinetic_symbol(&self) -> Vec<f64> {
        kinetic_symbol(&self.grid, self.kinetic)
    }

    /// Position-basis kinetic matrix `F† diag(ε) F`.
    pub fn kinetic_matrix(&self) -> Result<RMatrix> {
        multiplier_matrix(&self.grid, &self.kinetic_symbol())
    }

    /// Position-basis potential matrix `diag(V)` (entering `H` with a minus).
    pub fn potential_matrix(&self) -> RMatrix {
        RMatrix::from_diagonal(&crate::linalg::RVector::from_column_slice(&self.potential.realized))
    }

    /// `V(−i∇_p)` in the momentum basis: the convolution
    /// `(2π)^{−d/2} (π/L)ᵈ V̂(pₖ − pₖ′)`, entrywise nonnegative.
    pub fn momentum_potential_matrix(&self) -> RMatrix {
        let g = &self.grid;
        let w = g.continuum_factor() * g.momentum_weight();
        let hat = &self.potential.hat;
        RMatrix::from_fn(g.len(), g.len(), |k, kp| w * hat[g.combine(k, kp, -1)])
    }

    /// `Ĥ = diag(ε) − V(−i∇_p)`, built directly from the Fourier data.
    pub fn momentum_matrix(&self) -> RMatrix {
        let mut m = -self.momentum_potential_matrix();
        for (k, e) in self.kinetic_symbol().into_iter().enumerate() {
            m[(k, k)] += e;
        }
        m
    }
}

pub(crate) fn kinetic_symbol(grid: &Grid, kinetic: Kinetic) -> Vec<f64> {
    (0..grid.len()).map(|k| kinetic.symbol(grid, k)).collect()
}
