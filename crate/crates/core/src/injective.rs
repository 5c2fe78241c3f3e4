//! Injective tensor norm `μ_N(Φ) = sup |⟨Φ, φ_1⊗...⊗φ_N⟩|` over unit factors.
//!
//! The supremum is approached by alternating maximization: with all factors
//! but one fixed, the overlap is linear in the free factor, whose optimum is
//! the normalized conjugate of the partial contraction of `Φ̄` against the
//! others. Sweeps are repeated from many Haar-random starting tuples.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, PureState, ZERO};
use crate::random::{haar_state, rng_for};
use crate::tensor::TensorVector;

#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFit {
    pub value: f64,
    pub factors: Vec<PureState>,
    pub restarts_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingConfig {
    /// `None` uses [`default_restarts`].
    pub restarts: Option<usize>,
    pub max_sweeps: usize,
    pub tol: f64,
}

impl Default for AlternatingConfig {
    fn default() -> Self {
        Self { restarts: None, max_sweeps: 1000, tol: 1e-12 }
    }
}

/// `max(100, 10·Π dims)` capped at 2000.
pub fn default_restarts(dims: &[usize]) -> usize {
    let total: usize = dims.iter().product();
    total.saturating_mul(10).clamp(100, 2000)
}

/// `Σ conj(Φ) Π_{β≠free} φ_β` as a vector on factor `free`.
fn partial_contraction(v: &TensorVector, factors: &[Vec<Complex64>], free: usize) -> Vec<Complex64> {
    let dims = v.dims();
    // Contract from the last axis inwards so the remaining axes stay a prefix-major block.
    let mut data: Vec<Complex64> = v.amplitudes().iter().map(|z| z.conj()).collect();
    let mut shape: Vec<usize> = dims.to_vec();
    for axis in (0..dims.len()).rev() {
        if axis == free {
            continue;
        }
        let d = shape[axis];
        let post: usize = shape[axis + 1..].iter().product();
        let pre: usize = shape[..axis].iter().product();
        let phi = &factors[axis];
        let mut out = vec![ZERO; pre * post];
        for a in 0..pre {
            for (i, &f) in phi.iter().enumerate() {
                let src = &data[(a * d + i) * post..(a * d + i + 1) * post];
                let dst = &mut out[a * post..(a + 1) * post];
                for (o, s) in dst.iter_mut().zip(src) {
                    *o += s * f;
                }
            }
        }
        data = out;
        shape.remove(axis);
    }
    data
}

/// `|⟨Φ, φ_1⊗...⊗φ_N⟩|`.
pub fn overlap(v: &TensorVector, factors: &[PureState]) -> Result<f64> {
    if factors.len() != v.order() || factors.iter().zip(v.dims()).any(|(f, &d)| f.dim() != d) {
        return Err(Error::ShapeMismatch("factor dimensions do not match the tensor".into()));
    }
    let raw: Vec<Vec<Complex64>> = factors.iter().map(|f| f.amplitudes().to_vec()).collect();
    Ok(overlap_raw(v, &raw))
}

fn overlap_raw(v: &TensorVector, factors: &[Vec<Complex64>]) -> f64 {
    let c = partial_contraction(v, factors, 0);
    c.iter().zip(&factors[0]).map(|(a, b)| a * b).sum::<Complex64>().norm()
}

/// One alternating sweep over all factors; returns the value after the sweep.
fn sweep(v: &TensorVector, factors: &mut [Vec<Complex64>]) -> f64 {
    let mut value = 0.0;
    for free in 0..factors.len() {
        let c = partial_contraction(v, factors, free);
        let n = vec_norm(&c);
        if n > 0.0 {
            factors[free] = c.iter().map(|z| z.conj() / n).collect();
        }
        value = n;
    }
    value
}

struct Ascent {
    value: f64,
    factors: Vec<Vec<Complex64>>,
    converged: bool,
}

fn alternate(v: &TensorVector, mut factors: Vec<Vec<Complex64>>, cfg: &AlternatingConfig) -> Ascent {
    let mut value = overlap_raw(v, &factors);
    for _ in 0..cfg.max_sweeps {
        let next = sweep(v, &mut factors);
        debug_assert!(next >= value - 1e-12 * (1.0 + value), "alternating sweep decreased {value} -> {next}");
        let gain = next - value;
        value = value.max(next);
        if gain < cfg.tol {
            return Ascent { value, factors, converged: true };
        }
    }
    Ascent { value, factors, converged: false }
}

/// Values after each sweep from a given starting tuple, starting with the
/// initial overlap. Every step is nondecreasing.
pub fn sweep_trace(v: &TensorVector, start: &[PureState], sweeps: usize) -> Result<Vec<f64>> {
    let mut trace = vec![overlap(v, start)?];
    let mut factors: Vec<Vec<Complex64>> = start.iter().map(|f| f.amplitudes().to_vec()).collect();
    for _ in 0..sweeps {
        trace.push(sweep(v, &mut factors));
    }
    Ok(trace)
}

/// Injective norm estimate: the best overlap found over seeded random restarts.
pub fn mu(v: &TensorVector, cfg: &AlternatingConfig, seed: u64) -> Result<RankOneFit> {
    mu_with_starts(v, cfg, seed, &[])
}

/// As [`mu`], additionally running from each tuple in `warm_starts` after
/// the random restarts.
pub fn mu_with_starts(
    v: &TensorVector,
    cfg: &AlternatingConfig,
    seed: u64,
    warm_starts: &[Vec<PureState>],
) -> Result<RankOneFit> {
    if v.order() < 2 {
        return Err(Error::ShapeMismatch(format!("injective norm needs N >= 2 factors, got {}", v.order())));
    }
    for w in warm_starts {
        if w.len() != v.order() || w.iter().zip(v.dims()).any(|(f, &d)| f.dim() != d) {
            return Err(Error::ShapeMismatch("warm start does not match tensor dims".into()));
        }
    }
    let restarts = cfg.restarts.unwrap_or_else(|| default_restarts(v.dims()));
    let total = restarts + warm_starts.len();
    if total == 0 {
        return Err(Error::InvalidDimension("at least one restart is required".into()));
    }
    let dims = v.dims().to_vec();
    let results: Vec<Ascent> = (0..total)
        .into_par_iter()
        .map(|r| {
            let start: Vec<Vec<Complex64>> = if r < restarts {
                let mut rng = rng_for(seed, r as u64);
                dims.iter().map(|&d| haar_state(&mut rng, d).into_amplitudes()).collect()
            } else {
                warm_starts[r - restarts].iter().map(|f| f.amplitudes().to_vec()).collect()
            };
            alternate(v, start, cfg)
        })
        .collect();

    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    let win = &results[best];
    let factors = win
        .factors
        .iter()
        .map(|f| PureState::normalized(f.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankOneFit { value: win.value, factors, restarts_used: total, converged: win.converged })
}

/// `μ_3(Ã)²`, which equals `ν_∞` of the channel.
pub fn mu_of_channel(ch: &Channel, cfg: &AlternatingConfig, seed: u64) -> Result<f64> {
    Ok(mu(&ch.to_vector(), cfg, seed)?.value.powi(2))
}

/// Normalized totally antisymmetric vector on `C^3⊗C^3⊗C^3`.
pub fn antisymmetric_vector(d: usize) -> Result<TensorVector> {
    if d != 3 {
        return Err(Error::InvalidDimension(format!("the antisymmetric vector is built for d = 3 only, got {d}")));
    }
    let mut v = TensorVector::zeros(vec![3, 3, 3])?;
    let amp = 1.0 / 6f64.sqrt();
    for (idx, sign) in [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([2, 1, 0], -1.0), ([1, 0, 2], -1.0)] {
        v.set(&idx, Complex64::new(sign * amp, 0.0));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativityCheck {
    pub mu_vw: f64,
    pub mu_v: f64,
    pub mu_w: f64,
    /// `mu_vw / (mu_v·mu_w)`; above one means `μ` is not multiplicative on this pair.
    pub ratio: f64,
}

/// Compares `μ(v⊗w)` (factors regrouped pairwise) with `μ(v)·μ(w)`.
pub fn check_mu_multiplicativity(
    v: &TensorVector,
    w: &TensorVector,
    cfg: &AlternatingConfig,
    seed: u64,
) -> Result<MultiplicativityCheck> {
    if v.order() != w.order() {
        return Err(Error::ShapeMismatch(format!("orders differ: {} vs {}", v.order(), w.order())));
    }
    let fit_v = mu(v, cfg, seed)?;
    let fit_w = mu(w, cfg, seed.wrapping_add(1))?;
    let vw = v.regrouped_product(w)?;

    let mut warm = vec![fit_v
        .factors
        .iter()
        .zip(&fit_w.factors)
        .map(|(a, b)| crate::linalg::kron_vec(a, b))
        .collect::<Vec<_>>()];
    if v.dims() == w.dims() {
        warm.push(v.dims().iter().map(|&d| maximally_entangled(d)).collect());
    }
    let fit_vw = mu_with_starts(&vw, cfg, seed.wrapping_add(2), &warm)?;
    let ratio = fit_vw.value / (fit_v.value * fit_w.value);
    Ok(MultiplicativityCheck { mu_vw: fit_vw.value, mu_v: fit_v.value, mu_w: fit_w.value, ratio })
}

/// `Σ_a |aa⟩/√d`.
fn maximally_entangled(d: usize) -> PureState {
    let mut amps = vec![ZERO; d * d];
    for a in 0..d {
        amps[a * d + a] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    PureState::new(amps).expect("normalized")
}
