use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::fourier::{max_imag, max_modulus, to_complex, Fourier};
use super::grid::Grid;
use super::potential::EVENNESS_TOL;
use crate::error::{Error, Result};
use crate::rng;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunctionClass {
    /// `f̂ ≥ 0`.
    A,
    /// `f̂ ≥ 0` and `f(−x) = f(x)`.
    AEven,
}

impl TestFunctionClass {
    pub fn name(&self) -> &'static str {
        match self {
            TestFunctionClass::A => "A",
            TestFunctionClass::AEven => "A_even",
        }
    }
}

/// A test function stored by its nonnegative Fourier data on the momentum
/// nodes.
///
/// `realized[j] = (2π)^{−d/2} Σₖ e^{ipₖ·xⱼ} f̂(pₖ) (π/L)ᵈ`. The same array,
/// read by flat index, supplies the multiplier `f(p)` of `f(−i∇)` in the
/// momentum basis: `p·x` and the lattice pairing `2π c c′/N` agree exactly
/// on the self-dual grid and this keeps `f(−i∇)` a nonnegative combination
/// of lattice translations on every grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub class: TestFunctionClass,
    pub hat: Vec<f64>,
    pub realized: Vec<Complex64>,
    pub grid: Grid,
}

/// Validate `hat` against `class` and realize it on `grid`.
pub fn make_test_function(class: TestFunctionClass, hat_values: Vec<f64>, grid: &Grid) -> Result<TestFunction> {
    TestFunction::new(class, hat_values, grid)
}

impl TestFunction {
    pub fn new(class: TestFunctionClass, hat: Vec<f64>, grid: &Grid) -> Result<Self> {
        if hat.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} hat values", grid.len()),
                found: alloc::format!("{}", hat.len()),
            });
        }
        if let Some((index, &value)) = hat.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
            return Err(Error::NotInClassA { index, value });
        }
        if class == TestFunctionClass::AEven {
            if let Some((index, deviation)) = odd_part(grid, &hat) {
                return Err(Error::NotEven { index, deviation });
            }
        }
        let realized = Fourier::new(grid).from_continuum(&to_complex(&hat))?;
        Ok(Self {
            class,
            hat,
            realized,
            grid: *grid,
        })
    }

    /// `f ≡ value` for `value ≥ 0`.
    pub fn constant(grid: &Grid, value: f64) -> Result<Self> {
        let mut hat = vec![0.0; grid.len()];
        hat[grid.origin()] = value / (grid.continuum_factor() * grid.momentum_weight());
        Self::new(TestFunctionClass::AEven, hat, grid)
    }

    pub fn zero(grid: &Grid) -> Self {
        Self {
            class: TestFunctionClass::AEven,
            hat: vec![0.0; grid.len()],
            realized: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid: *grid,
        }
    }

    /// `‖f̂‖₁ = Σₖ f̂(pₖ) (π/L)ᵈ`.
    pub fn l1_norm(&self) -> f64 {
        self.hat.iter().sum::<f64>() * self.grid.momentum_weight()
    }

    pub fn is_zero(&self) -> bool {
        self.hat.iter().all(|&h| h == 0.0)
    }

    /// Rescale to `‖f̂‖₁ = 1`; the zero function is returned unchanged.
    pub fn normalized(mut self) -> Self {
        let norm = self.l1_norm();
        if norm > 0.0 {
            self.hat.iter_mut().for_each(|h| *h /= norm);
            self.realized.iter_mut().for_each(|z| *z /= norm);
        }
        self
    }

    /// The first reason `self` falls outside `class`, if any.
    pub fn class_violation(&self, class: TestFunctionClass) -> Option<Error> {
        if let Some((index, &value)) = self.hat.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
            return Some(Error::NotInClassA { index, value });
        }
        if class == TestFunctionClass::AEven {
            if let Some((index, deviation)) = odd_part(&self.grid, &self.hat) {
                return Some(Error::NotEven { index, deviation });
            }
        }
        None
    }

    pub fn is_even(&self) -> bool {
        odd_part(&self.grid, &self.hat).is_none()
    }

    /// Largest imaginary part of the realized values.
    pub fn imaginary_residue(&self) -> f64 {
        max_imag(&self.realized)
    }

    /// Real parts of the realized values; for even `f` these are the values.
    pub fn real_values(&self) -> Vec<f64> {
        self.realized.iter().map(|z| z.re).collect()
    }

    /// Relative size of the imaginary residue, `max|Im f| / max|f|`.
    pub fn relative_imaginary_residue(&self) -> f64 {
        let scale = max_modulus(&self.realized);
        if scale == 0.0 {
            0.0
        } else {
            self.imaginary_residue() / scale
        }
    }
}

fn odd_part(grid: &Grid, hat: &[f64]) -> Option<(usize, f64)> {
    let scale = hat.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    (0..hat.len()).find_map(|k| {
        let dev = (hat[k] - hat[grid.negate(k)]).abs();
        (dev > EVENNESS_TOL * scale).then_some((k, dev))
    })
}

/// `count` seeded members of `class`, each with `‖f̂‖₁ = 1`.
///
/// The first sample is the constant function and the second a hat
/// concentrated on the origin and its nearest neighbours. The rest mix
/// Gaussian bumps of random width and centre, pairs of bumps, and sparse
/// hats on a few random nodes; for the even class every hat is symmetrized.
pub fn sample_test_functions(
    class: TestFunctionClass,
    count: usize,
    seed: u64,
    grid: &Grid,
) -> Result<Vec<TestFunction>> {
    let mut rng = rng::seeded(seed);
    let len = grid.len();
    let dp = grid.momentum_spacing();
    let gaussian = |centre: [f64; 3], width: f64| -> Vec<f64> {
        (0..len)
            .map(|k| {
                let p = grid.momentum(k);
                let r2: f64 = (0..3).map(|a| (p[a] - centre[a]).powi(2)).sum();
                (-r2 / (width * width)).exp()
            })
            .collect()
    };
    let pmax = grid.half() as f64 * dp;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut hat = match i {
            0 => {
                let mut h = vec![0.0; len];
                h[grid.origin()] = 1.0;
                h
            }
            1 => gaussian([0.0; 3], 0.75 * dp),
            _ => {
                let mut centre = [0.0; 3];
                let kind = (i - 2) % 4;
                for c in centre.iter_mut().take(grid.dim()) {
                    *c = if kind == 0 {
                        0.0
                    } else {
                        rng::uniform(&mut rng, -0.5, 0.5) * pmax
                    };
                }
                let width = dp * 2f64.powf(rng::uniform(&mut rng, -0.5, 4.0));
                match kind {
                    0 | 1 => gaussian(centre, width),
                    2 => {
                        let mut other = [0.0; 3];
                        for c in other.iter_mut().take(grid.dim()) {
                            *c = rng::uniform(&mut rng, -0.5, 0.5) * pmax;
                        }
                        let weight = rng::uniform(&mut rng, 0.1, 1.0);
                        gaussian(centre, width)
                            .into_iter()
                            .zip(gaussian(other, width * 0.5))
                            .map(|(a, b)| a + weight * b)
                            .collect()
                    }
                    _ => {
                        let mut h = vec![0.0; len];
                        let nodes = 1 + (rng::uniform(&mut rng, 0.0, 6.0) as usize);
                        for _ in 0..nodes {
                            let k = (rng::uniform(&mut rng, 0.0, len as f64) as usize).min(len - 1);
                            h[k] += rng::uniform(&mut rng, 0.05, 1.0);
                        }
                        h
                    }
                }
            }
        };
        if class == TestFunctionClass::AEven {
            hat = (0..len).map(|k| 0.5 * (hat[k] + hat[grid.negate(k)])).collect();
        }
        out.push(TestFunction::new(class, hat, grid)?.normalized());
    }
    Ok(out)
}
