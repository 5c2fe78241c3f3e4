use std::fmt;
use std::str::FromStr;

use super::eigen::{eig_hermitian, Spectrum};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Schatten exponent `p ∈ (1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 1.0 {
            return Err(Error::InvalidExponent(p.to_string()));
        }
        if p.is_infinite() {
            return Ok(Self::Infinity);
        }
        Ok(Self::Finite(p))
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Self::Finite(p) => Self::finite(p),
            Self::Infinity => Ok(self),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Self::Infinity);
        }
        let p: f64 = s.parse().map_err(|_| Error::InvalidExponent(s.to_string()))?;
        Self::finite(p)
    }
}

/// `(Σ|λ|^p)^{1/p}` over a spectrum, or `max|λ|` at infinity.
pub fn spectrum_norm(spectrum: &Spectrum, p: Exponent) -> Result<f64> {
    let p = p.validate()?;
    let abs = spectrum.values().iter().map(|x| x.abs());
    Ok(match p {
        Exponent::Infinity => abs.fold(0.0, f64::max),
        Exponent::Finite(p) => {
            // Factor out the largest magnitude so large p cannot underflow.
            let top = spectrum.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if top == 0.0 {
                return Ok(0.0);
            }
            top * abs.map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    })
}

/// Schatten p-norm of a Hermitian matrix.
pub fn schatten_norm(m: &ComplexMatrix, p: Exponent) -> Result<f64> {
    let p = p.validate()?;
    spectrum_norm(&eig_hermitian(m)?, p)
}
