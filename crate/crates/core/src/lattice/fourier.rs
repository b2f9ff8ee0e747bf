use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
#[allow(unused_imports)]
use num_traits::Float;

/// Unitary discrete Fourier transform on a [`Grid`].
///
/// Forward: `f̂[k] = N^{−d/2} Σⱼ e^{−i pₖ·xⱼ} f[j]`. The continuum transform
/// `(2π)^{−d/2} ∫ e^{−ip·x} f(x) dx` is emulated by [`Fourier::to_continuum`],
/// which carries the quadrature weight `Δxᵈ`; its inverse carries `(π/L)ᵈ`.
#[derive(Debug, Clone)]
pub struct Fourier {
    grid: Grid,
    /// `e^{−2πi c c′/N} / √N`, row-major `N × N`.
    kernel: Vec<Complex64>,
}

impl Fourier {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.points_per_axis();
        let half = grid.half();
        let norm = 1.0 / (n as f64).sqrt();
        let mut kernel = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let prod = ((a as i64 - half) * (b as i64 - half)).rem_euclid(n as i64);
                let phase = -2.0 * PI * prod as f64 / n as f64;
                kernel.push(Complex64::new(phase.cos() * norm, phase.sin() * norm));
            }
        }
        Self { grid: *grid, kernel }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.grid.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("grid vector of length {}", self.grid.len()),
                found: alloc::format!("length {len}"),
            });
        }
        Ok(())
    }

    fn transform(&self, f: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
        self.check_len(f.len())?;
        let n = self.grid.points_per_axis();
        let d = self.grid.dim();
        let mut data = f.to_vec();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..d {
            let stride = n.pow((d - 1 - axis) as u32);
            let blocks = data.len() / (n * stride);
            for block in 0..blocks {
                for offset in 0..stride {
                    let base = block * n * stride + offset;
                    for (k, out) in line.iter_mut().enumerate() {
                        let row = &self.kernel[k * n..(k + 1) * n];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, w) in row.iter().enumerate() {
                            let w = if inverse { w.conj() } else { *w };
                            acc += w * data[base + j * stride];
                        }
                        *out = acc;
                    }
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
        Ok(data)
    }

    pub fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.transform(f, false)
    }

    pub fn inverse(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.transform(f, true)
    }

    pub fn forward_real(&self, f: &[f64]) -> Result<Vec<Complex64>> {
        self.forward(&to_complex(f))
    }

    pub fn inverse_real(&self, f: &[f64]) -> Result<Vec<Complex64>> {
        self.inverse(&to_complex(f))
    }

    /// `(2π)^{−d/2} Σₓ e^{−ip·x} g(x) Δxᵈ` on the momentum nodes.
    pub fn to_continuum(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        let scale = self.grid.continuum_factor() * self.grid.position_weight() * (self.grid.len() as f64).sqrt();
        Ok(self.forward(g)?.into_iter().map(|z| z * scale).collect())
    }

    /// `(2π)^{−d/2} Σₚ e^{ip·x} ĝ(p) (π/L)ᵈ` on the position nodes.
    pub fn from_continuum(&self, hat: &[Complex64]) -> Result<Vec<Complex64>> {
        let scale = self.grid.continuum_factor() * self.grid.momentum_weight() * (self.grid.len() as f64).sqrt();
        Ok(self.inverse(hat)?.into_iter().map(|z| z * scale).collect())
    }

    /// Dense unitary matrix `F` with `F[k, j] = N^{−d/2} e^{−i pₖ·xⱼ}`.
    pub fn matrix(&self) -> CMatrix {
        let len = self.grid.len();
        let n = self.grid.points_per_axis();
        let d = self.grid.dim();
        CMatrix::from_fn(len, len, |k, j| {
            let mut acc = Complex64::new(1.0, 0.0);
            let (mut kk, mut jj) = (k, j);
            for _ in 0..d {
                acc *= self.kernel[(kk % n) * n + (jj % n)];
                kk /= n;
                jj /= n;
            }
            acc
        })
    }
}

pub fn dft(grid: &Grid, f: &[Complex64]) -> Result<Vec<Complex64>> {
    Fourier::new(grid).forward(f)
}

pub fn idft(grid: &Grid, f: &[Complex64]) -> Result<Vec<Complex64>> {
    Fourier::new(grid).inverse(f)
}

pub(crate) fn to_complex(f: &[f64]) -> Vec<Complex64> {
    f.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

pub(crate) fn max_imag(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub(crate) fn max_modulus(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
