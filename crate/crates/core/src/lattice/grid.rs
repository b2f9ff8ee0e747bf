use core::f64::consts::PI;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Periodic `d`-dimensional lattice with `N` points per axis on the box
/// `[−L, L)ᵈ`.
///
/// Nodes sit at centered integer multiples of the spacing, `x = c·Δx` with
/// `c ∈ {−(N−1)/2, …, (N−1)/2}`, so the origin is a node and `x ↦ −x` maps
/// nodes to nodes exactly. Momentum nodes are `p = c·π/L` on the same index
/// set, which makes `p·x = 2π c c′ / N` and the discrete Fourier transform
/// exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    points: usize,
    half_length: f64,
}

/// Centered multi-index; unused trailing axes are zero.
pub type Index = [i64; 3];

impl Grid {
    pub fn new(dim: usize, points: usize, half_length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(alloc::format!(
                "dimension must be 1, 2 or 3 (got {dim})"
            )));
        }
        if points.is_multiple_of(2) {
            return Err(Error::EvenGridSize(points));
        }
        if points < 3 {
            return Err(Error::InvalidGrid(alloc::format!(
                "need at least 3 points per axis (got {points})"
            )));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidGrid(alloc::format!(
                "half-length must be positive and finite (got {half_length})"
            )));
        }
        Ok(Self {
            dim,
            points,
            half_length,
        })
    }

    /// Grid whose position and momentum node sets coincide
    /// (`Δx = π/L`, i.e. `L² = πN/2`).
    pub fn self_dual(dim: usize, points: usize) -> Result<Self> {
        Self::new(dim, points, (PI * points as f64 / 2.0).sqrt())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Number of lattice sites, `Nᵈ`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn momentum_spacing(&self) -> f64 {
        PI / self.half_length
    }

    /// `(N − 1) / 2`.
    pub fn half(&self) -> i64 {
        (self.points as i64 - 1) / 2
    }

    /// Multiplicative inverse of 2 modulo `N`.
    pub fn inverse_of_two(&self) -> i64 {
        (self.points as i64 + 1) / 2
    }

    /// Quadrature weight `Δxᵈ` of position sums.
    pub fn position_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Quadrature weight `(π/L)ᵈ` of momentum sums.
    pub fn momentum_weight(&self) -> f64 {
        self.momentum_spacing().powi(self.dim as i32)
    }

    /// `(2π)^{−d/2}`.
    pub fn continuum_factor(&self) -> f64 {
        (2.0 * PI).powf(-(self.dim as f64) / 2.0)
    }

    /// Representative of `c mod N` in `{−(N−1)/2, …, (N−1)/2}`.
    pub fn wrap(&self, c: i64) -> i64 {
        let n = self.points as i64;
        let r = c.rem_euclid(n);
        if r > self.half() {
            r - n
        } else {
            r
        }
    }

    pub fn centered(&self, flat: usize) -> Index {
        let mut out = [0i64; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = (rest % self.points) as i64 - self.half();
            rest /= self.points;
        }
        out
    }

    /// Flat index of a centered multi-index, wrapping each axis mod `N`.
    pub fn flat(&self, index: Index) -> usize {
        let mut flat = 0usize;
        for &c in index.iter().take(self.dim) {
            flat = flat * self.points + (self.wrap(c) + self.half()) as usize;
        }
        flat
    }

    pub fn origin(&self) -> usize {
        self.flat([0; 3])
    }

    /// Flat index of `−x`.
    pub fn negate(&self, flat: usize) -> usize {
        let c = self.centered(flat);
        self.flat([-c[0], -c[1], -c[2]])
    }

    pub fn position(&self, flat: usize) -> [f64; 3] {
        let c = self.centered(flat);
        let dx = self.spacing();
        [c[0] as f64 * dx, c[1] as f64 * dx, c[2] as f64 * dx]
    }

    pub fn momentum(&self, flat: usize) -> [f64; 3] {
        let c = self.centered(flat);
        let dp = self.momentum_spacing();
        [c[0] as f64 * dp, c[1] as f64 * dp, c[2] as f64 * dp]
    }

    pub fn position_norm_sq(&self, flat: usize) -> f64 {
        self.position(flat).iter().map(|x| x * x).sum()
    }

    pub fn momentum_norm(&self, flat: usize) -> f64 {
        self.momentum(flat).iter().map(|p| p * p).sum::<f64>().sqrt()
    }

    /// Flat indices of the momenta `±π/L · eₐ` closest to the origin.
    pub fn nearest_nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).flat_map(move |axis| {
            [1i64, -1].into_iter().map(move |s| {
                let mut c = [0i64; 3];
                c[axis] = s;
                self.flat(c)
            })
        })
    }

    /// Flat index of `a + b` (`sign = 1`) or `a − b` (`sign = −1`) on the
    /// periodic index lattice.
    pub fn combine(&self, a: usize, b: usize, sign: i64) -> usize {
        let (ca, cb) = (self.centered(a), self.centered(b));
        self.flat([ca[0] + sign * cb[0], ca[1] + sign * cb[1], ca[2] + sign * cb[2]])
    }
}

/// Discretization of the kinetic energy `−Δ` as a Fourier multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kinetic {
    /// `Σₐ (2 − 2 cos(pₐΔx)) / Δx²`, the nearest-neighbour lattice Laplacian.
    /// Agrees with `p²` to `O(p⁴Δx²)` and keeps every semigroup positivity
    /// statement exact on the lattice.
    #[default]
    Lattice,
    /// `|p|²` on the momentum nodes (pseudo-spectral Laplacian).
    Spectral,
}

impl Kinetic {
    pub fn symbol(&self, grid: &Grid, flat: usize) -> f64 {
        match self {
            Kinetic::Spectral => {
                let p = grid.momentum_norm(flat);
                p * p
            }
            Kinetic::Lattice => {
                let dx = grid.spacing();
                grid.momentum(flat)
                    .iter()
                    .take(grid.dim())
                    .map(|p| (2.0 - 2.0 * (p * dx).cos()) / (dx * dx))
                    .sum()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kinetic::Lattice => "lattice",
            Kinetic::Spectral => "spectral",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_bad_dimensions() {
        assert_eq!(Grid::new(1, 64, 10.0), Err(Error::EvenGridSize(64)));
        assert!(matches!(Grid::new(4, 5, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(1, 5, -1.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn index_round_trip_and_negation() {
        let g = Grid::new(2, 7, 3.0).unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.flat(g.centered(flat)), flat);
            let neg = g.negate(flat);
            let (x, y) = (g.position(flat), g.position(neg));
            assert!((x[0] + y[0]).abs() < 1e-15 && (x[1] + y[1]).abs() < 1e-15);
        }
        assert_eq!(g.position(g.origin()), [0.0; 3]);
    }

    #[test]
    fn inverse_of_two_is_modular_inverse() {
        for n in [3usize, 5, 63, 127] {
            let g = Grid::new(1, n, 1.0).unwrap();
            assert_eq!((2 * g.inverse_of_two()).rem_euclid(n as i64), 1);
        }
    }

    #[test]
    fn lattice_symbol_matches_p_squared_at_small_momentum() {
        let g = Grid::new(1, 255, 10.0).unwrap();
        let k = g.flat([1, 0, 0]);
        let p2 = Kinetic::Spectral.symbol(&g, k);
        let lat = Kinetic::Lattice.symbol(&g, k);
        assert!((p2 - lat).abs() < 1e-3 * p2);
        assert_eq!(Kinetic::Lattice.symbol(&g, g.origin()), 0.0);
    }

    #[test]
    fn self_dual_grid_spacings_match() {
        let g = Grid::self_dual(1, 63).unwrap();
        assert!((g.spacing() - g.momentum_spacing()).abs() < 1e-14);
    }
}
