//! Small dense complex linear algebra.

mod eigen;
mod matrix;
mod norm;

pub use eigen::{
    eig_hermitian, eig_hermitian_with, eigh, eigh_with, hermitian_function, EigConfig, EigenDecomposition,
    Spectrum, MAX_SWEEPS, OFF_DIAGONAL_REL_TOL, TOL_HERM,
};
pub use matrix::{inner, kron, kron_slices, kron_vec, partial_trace, vec_norm, ComplexMatrix, PureState, Subsystem, ONE, ZERO};
pub use norm::{schatten_norm, spectrum_norm, Exponent};
