use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("Jacobi diagonalization did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid exponent {0}: must satisfy p > 1 or p = inf")]
    InvalidExponent(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bisection bracket [{lo}, {hi}] does not straddle a sign change ({f_lo:e}, {f_hi:e})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
