//! Periodic lattice, discrete Fourier transform, potentials with
//! nonnegative even Fourier transform, and the test-function classes.

mod fourier;
mod grid;
mod potential;
mod test_function;

pub use fourier::{dft, idft, Fourier};
pub use grid::{Grid, Index, Kinetic};
pub use potential::{realize_potential, yukawa_hat, yukawa_prefactor, Potential, PotentialKind, EVENNESS_TOL};
pub use test_function::{make_test_function, sample_test_functions, TestFunction, TestFunctionClass};
