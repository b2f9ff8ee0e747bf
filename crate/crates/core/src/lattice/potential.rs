use alloc::string::String;
use alloc::vec::Vec;

use super::fourier::{max_imag, max_modulus, to_complex, Fourier};
use super::grid::Grid;
use super::test_function::{TestFunction, TestFunctionClass};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative tolerance for the evenness of Fourier data.
pub const EVENNESS_TOL: f64 = 1e-12;

/// Fourier-side description of an attractive potential `V`, entering the
/// Hamiltonian as `H = −Δ − V`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// Yukawa transform `2·2^{d/2−2}/(p² + m²)`, flattened to its value at
    /// `|p| = 1/n` inside the ball `|p| ≤ 1/n` and cut off for `|p| > n`.
    YukawaCutoff {
        mass: f64,
        cutoff: u32,
    },
    /// `2·2^{d/2−2}/(p² + m²)` on every momentum node; the `n → ∞` member of
    /// the cutoff family as seen by the lattice. Requires `m > 0`.
    YukawaLimit {
        mass: f64,
    },
    /// `a·(w²/2)^{d/2}·e^{−w²p²/4}`, the transform of `a·e^{−|x|²/w²}`.
    GaussianWell {
        depth: f64,
        width: f64,
    },
    CustomFourier {
        hat_values: Vec<f64>,
    },
}

impl PotentialKind {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialKind::YukawaCutoff { .. } => "yukawa_cutoff",
            PotentialKind::YukawaLimit { .. } => "yukawa_limit",
            PotentialKind::GaussianWell { .. } => "gaussian_well",
            PotentialKind::CustomFourier { .. } => "custom_fourier",
        }
    }
}

/// A potential realized on a grid: `hat` on the momentum nodes and the real
/// values `V(xⱼ) = (2π)^{−d/2} Σₚ e^{ip·xⱼ} V̂(p) (π/L)ᵈ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub kind: PotentialKind,
    /// Overall factor `λ` multiplying the kind's transform.
    pub coupling: f64,
    pub grid: Grid,
    pub hat: Vec<f64>,
    pub realized: Vec<f64>,
}

/// `2·2^{d/2−2}`, the numerator of the Yukawa transform.
pub fn yukawa_prefactor(dim: usize) -> f64 {
    2.0 * 2f64.powf(dim as f64 / 2.0 - 2.0)
}

/// Cut-off Yukawa transform `V̂ₙ(p)` at momentum magnitude `p_norm`.
pub fn yukawa_hat(p_norm: f64, dim: usize, mass: f64, cutoff: u32) -> Result<f64> {
    if !(mass >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "Yukawa mass must be >= 0 (got {mass})"
        )));
    }
    if cutoff == 0 {
        return Err(Error::InvalidParameter("Yukawa cutoff index must be >= 1".into()));
    }
    let c = yukawa_prefactor(dim);
    let n = cutoff as f64;
    Ok(if p_norm <= 1.0 / n {
        c / (n.powi(-2) + mass * mass)
    } else if p_norm <= n {
        c / (p_norm * p_norm + mass * mass)
    } else {
        0.0
    })
}

fn kind_hat(kind: &PotentialKind, grid: &Grid) -> Result<Vec<f64>> {
    let d = grid.dim();
    match kind {
        PotentialKind::YukawaCutoff { mass, cutoff } => (0..grid.len())
            .map(|k| yukawa_hat(grid.momentum_norm(k), d, *mass, *cutoff))
            .collect(),
        PotentialKind::YukawaLimit { mass } => {
            if !(*mass > 0.0) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "limit Yukawa transform needs mass > 0 (got {mass})"
                )));
            }
            let c = yukawa_prefactor(d);
            Ok((0..grid.len())
                .map(|k| {
                    let p = grid.momentum_norm(k);
                    c / (p * p + mass * mass)
                })
                .collect())
        }
        PotentialKind::GaussianWell { depth, width } => {
            if !(*depth > 0.0 && *width > 0.0) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "Gaussian well needs depth > 0 and width > 0 (got {depth}, {width})"
                )));
            }
            let pre = depth * (width * width / 2.0).powf(d as f64 / 2.0);
            Ok((0..grid.len())
                .map(|k| {
                    let p = grid.momentum_norm(k);
                    pre * (-width * width * p * p / 4.0).exp()
                })
                .collect())
        }
        PotentialKind::CustomFourier { hat_values } => {
            if hat_values.len() != grid.len() {
                return Err(Error::ShapeMismatch {
                    expected: alloc::format!("{} hat values", grid.len()),
                    found: alloc::format!("{}", hat_values.len()),
                });
            }
            Ok(hat_values.clone())
        }
    }
}

/// Validate nonnegativity and evenness of Fourier data.
pub(crate) fn check_sign_and_parity(grid: &Grid, hat: &[f64]) -> Result<()> {
    if let Some((k, &v)) = hat.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
        return Err(Error::PotentialAssumption(alloc::format!(
            "V̂(p) >= 0 fails at momentum index {k} (value {v:e})"
        )));
    }
    let scale = hat.iter().fold(0.0_f64, |a, &v| a.max(v)).max(f64::MIN_POSITIVE);
    for k in 0..hat.len() {
        let dev = (hat[k] - hat[grid.negate(k)]).abs();
        if dev > EVENNESS_TOL * scale {
            return Err(Error::PotentialAssumption(alloc::format!(
                "V̂(-p) = V̂(p) fails at momentum index {k} (deviation {dev:e})"
            )));
        }
    }
    Ok(())
}

/// Build the potential of `kind` on `grid` with unit coupling.
///
/// Fails if the transform is negative anywhere or not even; the support
/// clause of assumption (B) is checked separately by
/// [`Potential::check_assumption_b`] so that deliberately degenerate inputs
/// such as a constant potential can still be constructed.
pub fn realize_potential(kind: PotentialKind, grid: &Grid) -> Result<Potential> {
    let hat = kind_hat(&kind, grid)?;
    Potential::from_hat(kind, 1.0, grid, hat)
}

impl Potential {
    fn from_hat(kind: PotentialKind, coupling: f64, grid: &Grid, hat: Vec<f64>) -> Result<Self> {
        check_sign_and_parity(grid, &hat)?;
        let values = Fourier::new(grid).from_continuum(&to_complex(&hat))?;
        let scale = max_modulus(&values).max(f64::MIN_POSITIVE);
        let residue = max_imag(&values);
        if residue > 1e-12 * scale.max(1.0) {
            return Err(Error::NotReal { residue });
        }
        Ok(Self {
            kind,
            coupling,
            grid: *grid,
            hat,
            realized: values.iter().map(|z| z.re).collect(),
        })
    }

    /// Constant potential `V ≡ c`, i.e. `V̂` a lattice delta at `p = 0`.
    pub fn constant(grid: &Grid, c: f64) -> Result<Self> {
        let mut hat = alloc::vec![0.0; grid.len()];
        hat[grid.origin()] = c / (grid.continuum_factor() * grid.momentum_weight());
        realize_potential(PotentialKind::CustomFourier { hat_values: hat }, grid)
    }

    /// `λ·V` for `λ ≥ 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "coupling must be >= 0 (got {lambda})"
            )));
        }
        Ok(Self {
            kind: self.kind.clone(),
            coupling: self.coupling * lambda,
            grid: self.grid,
            hat: self.hat.iter().map(|v| v * lambda).collect(),
            realized: self.realized.iter().map(|v| v * lambda).collect(),
        })
    }

    /// Support clause of assumption (B): `V̂ > 0` at `p = 0` and at the
    /// nearest nonzero momenta.
    pub fn check_assumption_b(&self) -> Result<()> {
        check_sign_and_parity(&self.grid, &self.hat)?;
        let origin = self.grid.origin();
        let mut bad: Vec<usize> = Vec::new();
        if !(self.hat[origin] > 0.0) {
            bad.push(origin);
        }
        bad.extend(self.grid.nearest_nonzero().filter(|&k| !(self.hat[k] > 0.0)));
        if let Some(k) = bad.first() {
            return Err(Error::PotentialAssumption(alloc::format!(
                "supp V̂ ⊃ B_ε(0) fails: V̂ vanishes at momentum index {k}"
            )));
        }
        Ok(())
    }

    /// First momentum index where `self.hat < other.hat`, if any.
    pub fn first_order_violation(&self, other: &Potential) -> Result<Option<usize>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("potentials live on different grids".into()));
        }
        Ok(self.hat.iter().zip(&other.hat).position(|(a, b)| a < b))
    }

    /// `V⁽¹⁾ ⪰ V⁽²⁾`: `V̂⁽¹⁾ ≥ V̂⁽²⁾` at every momentum node.
    pub fn dominates(&self, other: &Potential) -> Result<bool> {
        Ok(self.first_order_violation(other)?.is_none())
    }

    /// The potential viewed as an even test function (`V ∈ 𝔄_e`).
    pub fn as_test_function(&self) -> Result<TestFunction> {
        TestFunction::new(TestFunctionClass::AEven, self.hat.clone(), &self.grid)
    }

    pub fn describe(&self) -> String {
        let params = match &self.kind {
            PotentialKind::YukawaCutoff { mass, cutoff } => alloc::format!("m={mass},n={cutoff}"),
            PotentialKind::YukawaLimit { mass } => alloc::format!("m={mass}"),
            PotentialKind::GaussianWell { depth, width } => alloc::format!("a={depth},w={width}"),
            PotentialKind::CustomFourier { hat_values } => {
                alloc::format!("custom[{}]", hat_values.len())
            }
        };
        alloc::format!("{}({params},lambda={})", self.kind.name(), self.coupling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn yukawa_branches() {
        // d = 3, m = 1, n = 2, |p| = 0.1: 2·2^{-1/2} / (1/4 + 1).
        let v = yukawa_hat(0.1, 3, 1.0, 2).unwrap();
        assert!((v - 2f64.sqrt() / 1.25).abs() < 1e-15);
        for d in 1..=3 {
            assert_eq!(yukawa_hat(4.0, d, 0.5, 2).unwrap(), 0.0);
        }
        let mid = yukawa_hat(1.5, 1, 1.0, 2).unwrap();
        assert!((mid - 2f64.powf(-0.5) / (2.25 + 1.0)).abs() < 1e-15);
        assert!(yukawa_hat(0.0, 1, 0.0, 3).unwrap().is_finite());
        assert!(yukawa_hat(0.3, 1, -1.0, 3).is_err());
    }

    #[test]
    fn yukawa_monotone_in_cutoff_on_every_node() {
        for (d, n) in [(1usize, 63usize), (2, 15), (3, 7)] {
            let g = Grid::new(d, n, 10.0).unwrap();
            for k in 0..g.len() {
                let p = g.momentum_norm(k);
                for cutoff in 1..16 {
                    let lo = yukawa_hat(p, d, 1.0, cutoff).unwrap();
                    let hi = yukawa_hat(p, d, 1.0, cutoff + 1).unwrap();
                    assert!(hi >= lo, "d={d} k={k} n={cutoff}");
                }
            }
        }
    }

    #[test]
    fn constant_from_delta_hat() {
        let g = Grid::new(1, 15, 4.0).unwrap();
        let v = Potential::constant(&g, 0.7).unwrap();
        assert!(v.realized.iter().all(|&x| (x - 0.7).abs() < 1e-12));
        assert!(matches!(v.check_assumption_b(), Err(Error::PotentialAssumption(_))));
    }

    #[test]
    fn yukawa_realization_even_real_peaked() {
        let g = Grid::new(1, 63, 10.0).unwrap();
        let v = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 4 }, &g).unwrap();
        v.check_assumption_b().unwrap();
        for j in 0..g.len() {
            assert!((v.realized[j] - v.realized[g.negate(j)]).abs() < 1e-12);
        }
        let origin = g.origin();
        assert!(v.realized.iter().all(|&x| x <= v.realized[origin]));
        // Direct quadrature oracle at one node.
        let j = g.flat([5, 0, 0]);
        let x = g.position(j)[0];
        let direct: f64 = (0..g.len())
            .map(|k| (g.momentum(k)[0] * x).cos() * v.hat[k])
            .sum::<f64>()
            * g.continuum_factor()
            * g.momentum_weight();
        assert!((direct - v.realized[j]).abs() < 1e-12);
    }

    #[test]
    fn gaussian_well_transform_positive() {
        let g = Grid::new(2, 25, 5.0).unwrap();
        let v = realize_potential(PotentialKind::GaussianWell { depth: 5.0, width: 1.0 }, &g).unwrap();
        assert!(v.hat.iter().all(|&h| h > 0.0));
        v.check_assumption_b().unwrap();
        // Continuum value at the origin is the depth.
        assert!((v.realized[g.origin()] - 5.0).abs() < 1e-5);
    }

    #[test]
    fn sign_indefinite_and_odd_transforms_rejected() {
        let g = Grid::new(1, 7, 2.0).unwrap();
        let mut hat = vec![1.0; 7];
        hat[2] = -0.1;
        hat[4] = -0.1;
        let err = realize_potential(PotentialKind::CustomFourier { hat_values: hat }, &g).unwrap_err();
        assert!(alloc::format!("{err}").contains("V̂(p) >= 0"));
        let mut odd = vec![1.0; 7];
        odd[0] = 2.0;
        let err = realize_potential(PotentialKind::CustomFourier { hat_values: odd }, &g).unwrap_err();
        assert!(alloc::format!("{err}").contains("V̂(-p) = V̂(p)"));
    }

    #[test]
    fn scaling_orders_potentials() {
        let g = Grid::new(1, 31, 8.0).unwrap();
        let w = realize_potential(PotentialKind::YukawaCutoff { mass: 1.0, cutoff: 3 }, &g).unwrap();
        let two = w.scaled(2.0).unwrap();
        assert!(two.dominates(&w).unwrap());
        assert!(!w.dominates(&two).unwrap());
    }
}
