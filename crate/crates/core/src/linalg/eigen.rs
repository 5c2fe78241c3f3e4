//! Cyclic Jacobi diagonalization of dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies
//! the classical real Jacobi rotation to the resulting real 2x2 block.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Default tolerance for the Hermiticity precondition.
pub const TOL_HERM: f64 = 1e-10;
/// Default sweep budget.
pub const MAX_SWEEPS: usize = 100;
/// Stop once the off-diagonal Frobenius mass drops below this fraction of `‖m‖_F`.
pub const OFF_DIAGONAL_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigConfig {
    pub tol_herm: f64,
    pub max_sweeps: usize,
    pub off_diagonal_rel_tol: f64,
}

impl Default for EigConfig {
    fn default() -> Self {
        Self { tol_herm: TOL_HERM, max_sweeps: MAX_SWEEPS, off_diagonal_rel_tol: OFF_DIAGONAL_REL_TOL }
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` descending.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// True when this is a valid density-matrix spectrum.
    pub fn is_density(&self, tol_psd: f64, tol_sum: f64) -> bool {
        self.min() >= -tol_psd && (self.sum() - 1.0).abs() <= tol_sum
    }
}

/// Eigenvalues paired with orthonormal eigenvectors, descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// Column `i` is the eigenvector for `spectrum.values()[i]`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, i)]).collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.rows();
        let vals = self.spectrum.values();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * vals[k]).sum()
        })
    }
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    eig_hermitian_with(m, &EigConfig::default())
}

pub fn eig_hermitian_with(m: &ComplexMatrix, cfg: &EigConfig) -> Result<Spectrum> {
    let (diag, _) = jacobi(m, cfg, false)?;
    Ok(Spectrum::from_values(diag))
}

pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    eigh_with(m, &EigConfig::default())
}

pub fn eigh_with(m: &ComplexMatrix, cfg: &EigConfig) -> Result<EigenDecomposition> {
    let (diag, vectors) = jacobi(m, cfg, true)?;
    let vectors = vectors.expect("vectors requested");
    let n = diag.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[b].total_cmp(&diag[a]));
    let sorted = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(EigenDecomposition {
        spectrum: Spectrum { values: order.iter().map(|&k| diag[k]).collect() },
        vectors: sorted,
    })
}

fn jacobi(m: &ComplexMatrix, cfg: &EigConfig, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let defect = m.hermitian_defect();
    if defect > cfg.tol_herm || defect.is_nan() {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    // Symmetrize so rounding in the input cannot leak into the result.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = cfg.off_diagonal_rel_tol * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence(cfg.max_sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / g;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = [[c, s·e^{iθ}], [−s·e^{−iθ}, c]] on coordinates (p, q); A ← U†AU.
    let u_pq = phase * s;
    let u_qp = -phase.conj() * s;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * u_qp.conj();
        a[(q, k)] = apk * u_pq.conj() + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c + vkq * u_qp;
            v[(k, q)] = vkp * u_pq + vkq * c;
        }
    }
}

/// Applies `f` to the eigenvalues of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let mut e = eigh(m)?;
    e.spectrum = Spectrum { values: e.spectrum.values.iter().map(|&x| f(x)).collect() };
    Ok(e.reconstruct())
}
