use alloc::string::String;

/// Errors raised by the cone calculus, lattice construction and the
/// spectral engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("element is not Hermitian (max deviation {deviation:e} > {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("element is not real (max imaginary part {residue:e})")]
    NotReal { residue: f64 },

    #[error("cone kind mismatch: {0}")]
    ConeKind(&'static str),

    #[error("not positivity preserving: entry {value:e} below -{tolerance:e}")]
    NotPositivityPreserving { value: f64, tolerance: f64 },

    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("coordinate change requires odd N (got N = {0})")]
    EvenGridSize(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("potential violates assumption (B)(ii): {0}")]
    PotentialAssumption(String),

    #[error("not in class A: hat value {value:e} at momentum index {index} is negative")]
    NotInClassA { index: usize, value: f64 },

    #[error("not in class A_e: hat(p) != hat(-p) at momentum index {index} (deviation {deviation:e})")]
    NotEven { index: usize, deviation: f64 },

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("uniqueness not certified: spectral gap {gap:e} below threshold {threshold:e}")]
    UniquenessNotCertified { gap: f64, threshold: f64 },

    #[error("negative inverse temperature beta = {0}")]
    NegativeBeta(f64),

    #[error("partition function underflow at beta = {beta}: shift the energy or lower beta")]
    PartitionUnderflow { beta: f64 },

    #[error("potentials are not comparable: hat(V1) < hat(V2) at momentum index {index}")]
    NotComparable { index: usize },

    #[error("model family: {0}")]
    Family(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;
