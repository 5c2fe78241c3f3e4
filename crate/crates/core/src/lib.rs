//! Maximal output purity of quantum channels and injective tensor norms.
//!
//! The crate computes `ν_p(S) = sup_ρ ‖S(ρ)‖_p` for channels in Kraus form,
//! the injective norm `μ_N` of multipartite vectors, and everything needed to
//! exhibit the Werner-Holevo channel `S(ρ) = (tr(ρ)𝟙 − ρ^T)/(d−1)` as a
//! counterexample to multiplicativity of `ν_p` for large `p` (and of `μ_3`).
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, Schatten norms,
//!   Kronecker products, partial traces.
//! - [`channels`]: Kraus channels, the Werner-Holevo channel, structural checks.
//! - [`purity`]: analytic and numerical `ν_p`, the gap `Δ(p, Φ)`, `p₀`.
//! - [`injective`]: alternating rank-one maximization for `μ_N`.
//! - [`cli`]: the `purity` command-line front end.

pub mod channels;
pub mod cli;
pub mod error;
pub mod injective;
pub mod linalg;
pub mod purity;
pub mod random;
pub mod tensor;

pub use channels::{wh_channel, Channel};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Exponent, PureState, Spectrum};
pub use tensor::TensorVector;
