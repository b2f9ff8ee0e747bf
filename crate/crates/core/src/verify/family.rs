use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{realize_potential, Grid, Kinetic, Potential, PotentialKind};
use crate::spectral::LatticeModel;

/// Cut-off Yukawa potentials `λVₙ` for `n ∈ {n_lo..n_hi}` on one grid,
/// with the uncut transform as the limit member.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFamily {
    pub grid: Grid,
    pub mass: f64,
    pub n_lo: u32,
    pub n_hi: u32,
    pub coupling: f64,
    pub kinetic: Kinetic,
}

impl ModelFamily {
    pub fn yukawa(grid: &Grid, mass: f64, n_lo: u32, n_hi: u32) -> Result<Self> {
        if n_lo == 0 || n_lo > n_hi {
            return Err(Error::Family(alloc::format!(
                "cutoff range must satisfy 1 <= n_lo <= n_hi (got {n_lo}..{n_hi})"
            )));
        }
        if !(mass > 0.0) {
            return Err(Error::Family(alloc::format!("Yukawa mass must be > 0 (got {mass})")));
        }
        Ok(Self {
            grid: *grid,
            mass,
            n_lo,
            n_hi,
            coupling: 1.0,
            kinetic: Kinetic::Lattice,
        })
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_kinetic(mut self, kinetic: Kinetic) -> Self {
        self.kinetic = kinetic;
        self
    }

    pub fn cutoffs(&self) -> impl Iterator<Item = u32> {
        self.n_lo..=self.n_hi
    }

    pub fn potential(&self, n: u32) -> Result<Potential> {
        realize_potential(
            PotentialKind::YukawaCutoff {
                mass: self.mass,
                cutoff: n,
            },
            &self.grid,
        )?
        .scaled(self.coupling)
    }

    pub fn limit_potential(&self) -> Result<Potential> {
        realize_potential(PotentialKind::YukawaLimit { mass: self.mass }, &self.grid)?.scaled(self.coupling)
    }

    pub fn model(&self, n: u32) -> Result<LatticeModel> {
        LatticeModel::new(&self.grid, &self.potential(n)?, self.kinetic)
    }

    pub fn limit_model(&self) -> Result<LatticeModel> {
        LatticeModel::new(&self.grid, &self.limit_potential()?, self.kinetic)
    }

    /// `(n, Hₙ)` for every cutoff, after checking that the transforms are
    /// nodewise nondecreasing in `n` and dominated by the limit.
    pub fn models(&self) -> Result<Vec<(u32, LatticeModel)>> {
        self.check_monotone()?;
        self.cutoffs().map(|n| Ok((n, self.model(n)?))).collect()
    }

    pub fn check_monotone(&self) -> Result<()> {
        let mut previous: Option<(u32, Potential)> = None;
        for n in self.cutoffs() {
            let v = self.potential(n)?;
            if let Some((m, prev)) = &previous {
                if let Some(k) = v.first_order_violation(prev)? {
                    return Err(Error::Family(alloc::format!(
                        "hat(V_{n}) < hat(V_{m}) at momentum index {k}"
                    )));
                }
            }
            previous = Some((n, v));
        }
        if let Some((n, last)) = previous {
            if let Some(k) = self.limit_potential()?.first_order_violation(&last)? {
                return Err(Error::Family(alloc::format!(
                    "limit transform below hat(V_{n}) at momentum index {k}"
                )));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        alloc::format!(
            "yukawa family d={} N={} L={} m={} n={}..{} lambda={} kinetic={}",
            self.grid.dim(),
            self.grid.points_per_axis(),
            self.grid.half_length(),
            self.mass,
            self.n_lo,
            self.n_hi,
            self.coupling,
            self.kinetic.name()
        )
    }
}
