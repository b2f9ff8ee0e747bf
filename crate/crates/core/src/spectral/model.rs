use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{Fourier, Grid, Kinetic, Potential};
use crate::linalg::{Eigensystem, RMatrix, RVector};

use super::hamiltonian::Hamiltonian;

/// Relative spectral gap below which the ground state is not accepted as
/// unique.
pub const UNIQUENESS_THRESHOLD: f64 = 1e-10;

/// One `H = −Δ − V` instance with its full eigendecomposition.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    pub hamiltonian: Hamiltonian,
    pub eigen: Eigensystem,
}

/// Lowest eigenpair of a [`LatticeModel`].
#[derive(Debug, Clone)]
pub struct GroundState {
    pub grid: Grid,
    pub energy: f64,
    /// Unit-norm real ground vector, sign fixed by a positive entry sum.
    pub vector: Vec<f64>,
    pub gap: f64,
    /// `F ψ`, real for even potentials.
    pub psi_hat: Vec<f64>,
    /// Largest imaginary part discarded from `F ψ`.
    pub psi_hat_imaginary: f64,
    /// `‖Hψ − E₀ψ‖`.
    pub residual: f64,
}

impl GroundState {
    pub fn min_psi(&self) -> f64 {
        self.vector.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_psi_hat(&self) -> f64 {
        self.psi_hat.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `ψ > 0` and `ψ̂ > 0` entrywise.
    pub fn is_strictly_positive(&self) -> bool {
        self.min_psi() > 0.0 && self.min_psi_hat() > 0.0
    }
}

impl LatticeModel {
    pub fn new(grid: &Grid, potential: &Potential, kinetic: Kinetic) -> Result<Self> {
        let hamiltonian = Hamiltonian::assemble(grid, potential, kinetic)?;
        Self::from_hamiltonian(hamiltonian)
    }

    pub fn from_hamiltonian(hamiltonian: Hamiltonian) -> Result<Self> {
        let eigen = Eigensystem::new(&hamiltonian.matrix)?;
        Ok(Self { hamiltonian, eigen })
    }

    pub fn grid(&self) -> &Grid {
        &self.hamiltonian.grid
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `‖H‖` (largest eigenvalue magnitude).
    pub fn norm(&self) -> f64 {
        self.eigen.norm()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigen.values[0]
    }

    pub fn gap(&self) -> f64 {
        if self.eigen.dim() < 2 {
            f64::INFINITY
        } else {
            self.eigen.values[1] - self.eigen.values[0]
        }
    }

    /// Lowest eigenpair. Errors if the gap is not resolved; positivity of
    /// `ψ` and `ψ̂` is reported on the result rather than enforced.
    pub fn ground_state(&self) -> Result<GroundState> {
        let gap = self.gap();
        let threshold = UNIQUENESS_THRESHOLD * self.norm().max(1.0);
        if !(gap > threshold) {
            return Err(Error::UniquenessNotCertified { gap, threshold });
        }
        let energy = self.ground_energy();
        let col = self.eigen.vectors.column(0);
        let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
        let mut psi: RVector = col * sign;
        let norm = psi.norm();
        psi /= norm;
        let residual = (&self.hamiltonian.matrix * &psi - &psi * energy).norm();
        let vector: Vec<f64> = psi.iter().copied().collect();
        let hat = Fourier::new(self.grid()).forward_real(&vector)?;
        let psi_hat_imaginary = hat.iter().fold(0.0_f64, |a, z| a.max(z.im.abs()));
        Ok(GroundState {
            grid: *self.grid(),
            energy,
            vector,
            gap,
            psi_hat: hat.iter().map(|z| z.re).collect(),
            psi_hat_imaginary,
            residual,
        })
    }

    /// `U diag(f(λ)) Uᵀ`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> RMatrix {
        self.eigen.apply_fn(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{realize_potential, PotentialKind};

    fn model(kind: PotentialKind) -> LatticeModel {
        let g = Grid::new(1, 63, 10.0).unwrap();
        let v = realize_potential(kind, &g).unwrap();
        LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap()
    }

    #[test]
    fn yukawa_ground_state_is_positive_in_both_bases() {
        let m = model(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 4 });
        let gs = m.ground_state().unwrap();
        let norm: f64 = gs.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(gs.residual < 1e-8 * m.norm());
        assert!(gs.min_psi() > 0.0, "{}", gs.min_psi());
        assert!(gs.min_psi_hat() > 0.0, "{}", gs.min_psi_hat());
        assert!(gs.psi_hat_imaginary < 1e-12);
        assert!(gs.energy < 0.0);
    }

    #[test]
    fn gaussian_well_ground_state_is_positive() {
        let m = model(PotentialKind::GaussianWell { depth: 5.0, width: 1.0 });
        let gs = m.ground_state().unwrap();
        assert!(gs.is_strictly_positive());
    }

    #[test]
    fn constant_potential_is_the_canonical_negative_case() {
        let g = Grid::new(1, 31, 6.0).unwrap();
        let v = Potential::constant(&g, 0.5).unwrap();
        let m = LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap();
        let gs = m.ground_state().unwrap();
        assert!((gs.energy + 0.5).abs() < 1e-12);
        let c = 1.0 / (31f64).sqrt();
        assert!(gs.vector.iter().all(|x| (x - c).abs() < 1e-12));
        // ψ̂ is a lattice delta: strict positivity in momentum fails.
        assert!(gs.min_psi_hat().abs() < 1e-12);
        assert!(!gs.is_strictly_positive());
    }

    #[test]
    fn energy_moves_one_for_one_with_a_constant_shift() {
        let g = Grid::new(1, 31, 6.0).unwrap();
        let w = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 3 }, &g).unwrap();
        let energy = |c: f64| {
            let mut v = w.clone();
            let shift = Potential::constant(&g, c).unwrap();
            for (a, b) in v.realized.iter_mut().zip(&shift.realized) {
                *a += b;
            }
            LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap().ground_energy()
        };
        let h = 1e-4;
        let slope = (energy(0.3 + h) - energy(0.3)) / h;
        assert!((slope + 1.0).abs() < 1e-6, "{slope}");
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        let g = Grid::new(1, 5, 1.0).unwrap();
        let v = Potential::constant(&g, 0.0).unwrap();
        let mut h = Hamiltonian::assemble(&g, &v, Kinetic::Lattice).unwrap();
        h.matrix = RMatrix::identity(5, 5);
        let m = LatticeModel::from_hamiltonian(h).unwrap();
        assert!(matches!(m.ground_state(), Err(Error::UniquenessNotCertified { .. })));
    }
}
