//! Seeded random instances: Haar states, unitaries, density matrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, vec_norm, ComplexMatrix, PureState};

/// Independent generator for stream `stream` under master seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Haar-distributed unit vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v = gaussian_vec(rng, dim);
        if vec_norm(&v) > 1e-300 {
            return PureState::normalized(v).expect("nonzero vector");
        }
    }
}

/// Haar-distributed unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vec(rng, dim);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random full-rank density matrix `GG†/tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    (&g + &g.adjoint()).scale_real(0.5)
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}
