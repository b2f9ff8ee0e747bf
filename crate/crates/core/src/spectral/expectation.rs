use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Fourier, Grid, TestFunction};
use crate::linalg::{RMatrix, RVector};

use super::model::{GroundState, LatticeModel};
#[allow(unused_imports)]
use num_traits::Float;

fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(alloc::format!(
            "ground state on {a:?}, operand on {b:?}"
        )));
    }
    Ok(())
}

/// `⟨ψ|f ψ⟩ = Σⱼ f(xⱼ) ψⱼ²` with the complex value kept so callers can
/// inspect the imaginary residue.
pub fn expectation_position_complex(gs: &GroundState, f: &TestFunction) -> Result<Complex64> {
    same_grid(&gs.grid, &f.grid)?;
    Ok(gs
        .vector
        .iter()
        .zip(&f.realized)
        .map(|(psi, fx)| fx * (psi * psi))
        .sum())
}

/// `⟨f⟩ = Re ⟨ψ|f ψ⟩`.
pub fn expectation_position(gs: &GroundState, f: &TestFunction) -> Result<f64> {
    Ok(expectation_position_complex(gs, f)?.re)
}

/// `⟨f(−i∇)⟩ = Σₖ f(pₖ) |ψ̂ₖ|²`.
pub fn expectation_momentum(gs: &GroundState, f: &TestFunction) -> Result<f64> {
    same_grid(&gs.grid, &f.grid)?;
    Ok(gs.psi_hat.iter().zip(&f.realized).map(|(ph, fp)| fp.re * ph * ph).sum())
}

/// `⟨ψ|F† diag(f) F ψ⟩` evaluated with the dense Fourier matrix.
pub fn expectation_momentum_dense(gs: &GroundState, f: &TestFunction) -> Result<Complex64> {
    same_grid(&gs.grid, &f.grid)?;
    let fm = Fourier::new(&gs.grid).matrix();
    let psi =
        crate::linalg::CMatrix::from_iterator(gs.vector.len(), 1, gs.vector.iter().map(|&x| Complex64::new(x, 0.0)));
    let hat = &fm * &psi;
    let scaled = crate::linalg::CMatrix::from_iterator(hat.len(), 1, hat.iter().zip(&f.realized).map(|(h, fp)| h * fp));
    Ok((psi.adjoint() * fm.adjoint() * scaled)[(0, 0)])
}

/// `⟨ψ| f(−i∇) g ψ⟩`, complex.
pub fn mixed_expectation(gs: &GroundState, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
    same_grid(&gs.grid, &f.grid)?;
    same_grid(&gs.grid, &g.grid)?;
    let fourier = Fourier::new(&gs.grid);
    let g_psi: Vec<Complex64> = gs.vector.iter().zip(&g.realized).map(|(psi, gx)| gx * *psi).collect();
    let hat = fourier.forward(&g_psi)?;
    Ok(hat
        .iter()
        .zip(&gs.psi_hat)
        .zip(&f.realized)
        .map(|((h, ph), fp)| fp * h * *ph)
        .sum())
}

/// `ρ̂(p) = (2π)^{−d/2} Σₓ e^{−ip·x} |ψ(x)|² Δxᵈ` for the continuum
/// normalization `Σ |ψ|² Δxᵈ = 1`.
pub fn momentum_distribution(gs: &GroundState) -> Result<Vec<f64>> {
    let g = &gs.grid;
    let density: Vec<f64> = gs.vector.iter().map(|x| x * x).collect();
    let hat = Fourier::new(g).forward_real(&density)?;
    let scale = g.continuum_factor() * (g.len() as f64).sqrt();
    Ok(hat.iter().map(|z| z.re * scale).collect())
}

/// The normalized trial vector `φ_β = e^{−βH}Ω / ‖e^{−βH}Ω‖` with
/// `Ω ∝ e^{−|x|²/2}`.
#[derive(Debug, Clone)]
pub struct TrialState {
    pub omega: Vec<f64>,
    pub beta: f64,
    pub phi: Vec<f64>,
    /// `ln Z_β` with `Z_β = ‖e^{−βH}Ω‖²`.
    pub log_z: f64,
}

impl TrialState {
    pub fn new(model: &LatticeModel, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::NegativeBeta(beta));
        }
        let g = model.grid();
        let mut omega: Vec<f64> = (0..g.len())
            .map(|j| PI.powf(-(g.dim() as f64) / 4.0) * (-g.position_norm_sq(j) / 2.0).exp())
            .collect();
        let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        omega.iter_mut().for_each(|x| *x /= norm);
        let u = &model.eigen.vectors;
        let e0 = model.ground_energy();
        let coeffs = u.transpose() * RVector::from_column_slice(&omega);
        let damped = RVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&model.eigen.values)
                .map(|(c, l)| c * (-beta * (l - e0)).exp()),
        );
        let shifted_norm = damped.norm();
        if !(shifted_norm > 0.0) || !shifted_norm.is_finite() {
            return Err(Error::PartitionUnderflow { beta });
        }
        let phi = u * damped / shifted_norm;
        Ok(Self {
            omega,
            beta,
            phi: phi.iter().copied().collect(),
            log_z: 2.0 * shifted_norm.ln() - 2.0 * beta * e0,
        })
    }

    pub fn z_beta(&self) -> f64 {
        self.log_z.exp()
    }

    pub fn expectation(&self, a: &RMatrix) -> Result<f64> {
        if a.nrows() != self.phi.len() || a.ncols() != self.phi.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{0}x{0} operator", self.phi.len()),
                found: alloc::format!("{}x{}", a.nrows(), a.ncols()),
            });
        }
        let phi = RVector::from_column_slice(&self.phi);
        Ok(phi.dot(&(a * &phi)))
    }
}

/// `⟨φ_β|A φ_β⟩`, converging to the ground-state expectation as `β → ∞`.
pub fn finite_beta_expectation(model: &LatticeModel, a: &RMatrix, beta: f64) -> Result<f64> {
    TrialState::new(model, beta)?.expectation(a)
}

/// Position-basis matrix of multiplication by the real parts of `f`.
pub fn position_multiplier(f: &TestFunction) -> RMatrix {
    RMatrix::from_diagonal(&RVector::from_iterator(
        f.realized.len(),
        f.realized.iter().map(|z| z.re),
    ))
}

/// Position-basis matrix of `f(−i∇)` (real part, exact for even `f`).
pub fn momentum_multiplier(f: &TestFunction) -> Result<RMatrix> {
    let symbol: Vec<f64> = f.realized.iter().map(|z| z.re).collect();
    super::hamiltonian::multiplier_matrix(&f.grid, &symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{realize_potential, sample_test_functions, Kinetic, PotentialKind, TestFunctionClass};

    fn model() -> LatticeModel {
        let g = Grid::new(1, 63, 10.0).unwrap();
        let v = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 4 }, &g).unwrap();
        LatticeModel::new(&g, &v, Kinetic::Lattice).unwrap()
    }

    #[test]
    fn constant_test_function_gives_one() {
        let m = model();
        let gs = m.ground_state().unwrap();
        let one = TestFunction::constant(m.grid(), 1.0).unwrap();
        assert!((expectation_position(&gs, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation_momentum(&gs, &one).unwrap() - 1.0).abs() < 1e-12);
        let zero = TestFunction::zero(m.grid());
        assert_eq!(expectation_position(&gs, &zero).unwrap(), 0.0);
    }

    #[test]
    fn two_representations_of_momentum_expectation_agree() {
        let m = model();
        let gs = m.ground_state().unwrap();
        for f in sample_test_functions(TestFunctionClass::A, 30, 5, m.grid()).unwrap() {
            let a = expectation_momentum(&gs, &f).unwrap();
            let b = expectation_momentum_dense(&gs, &f).unwrap();
            assert!((a - b.re).abs() < 1e-10 && b.im.abs() < 1e-10);
            assert!(a >= -1e-10);
            assert!(expectation_position(&gs, &f).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn rho_hat_at_origin_is_the_continuum_factor() {
        for (d, n) in [(1usize, 63usize), (2, 15), (3, 7)] {
            let g = Grid::new(d, n, 6.0).unwrap();
            let v = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 4 }, &g).unwrap();
            let gs = LatticeModel::new(&g, &v, Kinetic::Lattice)
                .unwrap()
                .ground_state()
                .unwrap();
            let rho = momentum_distribution(&gs).unwrap();
            assert!((rho[g.origin()] - g.continuum_factor()).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_beta_converges_monotonically() {
        let m = model();
        let gs = m.ground_state().unwrap();
        let f = &sample_test_functions(TestFunctionClass::AEven, 3, 2, m.grid()).unwrap()[2];
        let a = position_multiplier(f);
        let exact = expectation_position(&gs, f).unwrap();
        let omega_only = finite_beta_expectation(&m, &a, 0.0).unwrap();
        let t = TrialState::new(&m, 0.0).unwrap();
        let direct: f64 = t.omega.iter().zip(&f.realized).map(|(o, fx)| o * o * fx.re).sum();
        assert!((omega_only - direct).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for beta in [5.0, 10.0, 20.0, 40.0] {
            let err = (finite_beta_expectation(&m, &a, beta).unwrap() - exact).abs();
            assert!(err < last || err < 1e-14);
            // Even observables couple to the first even excitation.
            assert!(err <= (-beta * m.gap()).exp(), "beta={beta}: {err}");
            last = err;
        }
        let t = TrialState::new(&m, 3.0).unwrap();
        assert!((t.phi.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(t.z_beta() > 0.0);
    }

    #[test]
    fn momentum_multiplier_matches_momentum_expectation() {
        let m = model();
        let gs = m.ground_state().unwrap();
        let f = &sample_test_functions(TestFunctionClass::AEven, 4, 9, m.grid()).unwrap()[3];
        let op = momentum_multiplier(f).unwrap();
        let psi = RVector::from_column_slice(&gs.vector);
        let via_matrix = psi.dot(&(&op * &psi));
        assert!((via_matrix - expectation_momentum(&gs, f).unwrap()).abs() < 1e-12);
    }
}
