//! Maximal output purity `ν_p` and the multiplicativity gap `Δ`.
//!
//! Closed forms for the Werner-Holevo channel live next to a general
//! numerical maximizer of `‖S(|φ⟩⟨φ|)‖_p` over pure inputs, so each can be
//! checked against the other.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigh, spectrum_norm, ComplexMatrix, Exponent, PureState, Spectrum, ZERO};
use crate::random::{haar_state, rng_for};

/// Schmidt coefficients `c_α ≥ 0`, `Σ c_α² = 1`, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    coeffs: Vec<f64>,
}

impl SchmidtVector {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidDimension("empty Schmidt vector".into()));
        }
        if coeffs.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::InvalidDimension("Schmidt coefficients must be nonnegative".into()));
        }
        let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidDimension(format!("Schmidt coefficients have squared norm {norm2}")));
        }
        coeffs.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { coeffs })
    }

    /// From squared coefficients `c_α²`; tiny negative rounding is clamped to zero.
    pub fn from_squares(squares: &[f64]) -> Result<Self> {
        if squares.iter().any(|&s| s < -1e-12) {
            return Err(Error::InvalidDimension("negative squared Schmidt coefficient".into()));
        }
        Self::new(squares.iter().map(|s| s.max(0.0).sqrt()).collect())
    }

    pub fn maximally_entangled(d: usize) -> Self {
        Self { coeffs: vec![1.0 / (d as f64).sqrt(); d] }
    }

    pub fn product(d: usize) -> Self {
        let mut coeffs = vec![0.0; d];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `Σ_α c_α |αα⟩`.
    pub fn to_state(&self) -> PureState {
        let d = self.d();
        let mut amps = vec![ZERO; d * d];
        for (a, &c) in self.coeffs.iter().enumerate() {
            amps[a * d + a] = Complex64::new(c, 0.0);
        }
        PureState::new(amps).expect("normalized by construction")
    }
}

/// Best value found by [`nu_p_numeric`].
#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    pub p: Exponent,
    pub value: f64,
    pub maximizer: PureState,
    pub restarts_used: usize,
    pub converged: bool,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Multistart settings for the pure-input ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop a restart once one step improves the value by less than this.
    pub tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { restarts: 50, max_iterations: 500, tol: 1e-10 }
    }
}

/// `ν_p` of the Werner-Holevo channel: `(d−1)^{−(1−1/p)}`.
pub fn nu_p_wh_analytic(d: usize, p: Exponent) -> Result<f64> {
    if d < 3 {
        return Err(Error::InvalidDimension(format!("Werner-Holevo channel needs d >= 3, got {d}")));
    }
    if let Exponent::Finite(x) = p {
        Exponent::finite(x)?;
    }
    Ok((d as f64 - 1.0).powf(-(1.0 - p.reciprocal())))
}

/// Output spectrum and Heisenberg-picture gradient direction at a pure input.
struct Evaluation {
    value: f64,
    /// `S*(σ^{p−1})` up to a positive factor; `S*(|ψ⟩⟨ψ|)` for the top eigenvector at `p = ∞`.
    gradient: ComplexMatrix,
}

fn evaluate(ch: &Channel, phi: &[Complex64], p: Exponent) -> Result<Evaluation> {
    let kraus = ch.kraus();
    // Columns A_x φ; the nonzero output spectrum is that of their Gram matrix.
    let cols: Vec<Vec<Complex64>> = kraus.iter().map(|a| a.matvec(phi)).collect();
    let k = cols.len();
    let (values, out_vectors): (Vec<f64>, Vec<Vec<Complex64>>) = if k < ch.dim_out() {
        let gram = ComplexMatrix::from_fn(k, k, |i, j| crate::linalg::inner(&cols[i], &cols[j]));
        let e = eigh(&gram)?;
        let mut vals = Vec::new();
        let mut vecs = Vec::new();
        for (i, &lam) in e.spectrum.values().iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            let w = e.vector(i);
            let scale = 1.0 / lam.sqrt();
            let u: Vec<Complex64> = (0..ch.dim_out())
                .map(|r| cols.iter().zip(&w).map(|(c, wx)| c[r] * wx).sum::<Complex64>() * scale)
                .collect();
            vals.push(lam);
            vecs.push(u);
        }
        (vals, vecs)
    } else {
        let e = eigh(&ch.apply_pure(phi))?;
        let vals = e.spectrum.values().to_vec();
        let vecs = (0..vals.len()).map(|i| e.vector(i)).collect();
        (vals, vecs)
    };
    let value = spectrum_norm(&Spectrum::from_values(values.clone()), p)?;

    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let weights: Vec<f64> = match p {
        Exponent::Infinity => values.iter().enumerate().map(|(i, _)| if i == 0 { 1.0 } else { 0.0 }).collect(),
        Exponent::Finite(p) => values.iter().map(|&l| if l > 0.0 && top > 0.0 { (l / top).powf(p - 1.0) } else { 0.0 }).collect(),
    };
    let n = ch.dim_in();
    let mut gradient = ComplexMatrix::zeros(n, n);
    for (u, &w) in out_vectors.iter().zip(&weights) {
        if w == 0.0 {
            continue;
        }
        for a in kraus {
            // A_x† u
            let g: Vec<Complex64> = (0..n).map(|c| (0..a.rows()).map(|r| a[(r, c)].conj() * u[r]).sum()).collect();
            for i in 0..n {
                let gi = g[i] * w;
                for j in 0..n {
                    gradient[(i, j)] += gi * g[j].conj();
                }
            }
        }
    }
    Ok(Evaluation { value, gradient })
}

/// Pure-input output norm `‖S(|φ⟩⟨φ|)‖_p`.
pub fn output_norm(ch: &Channel, phi: &PureState, p: Exponent) -> Result<f64> {
    if phi.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch(format!("input has dim {}, channel expects {}", phi.dim(), ch.dim_in())));
    }
    Ok(evaluate(ch, phi.amplitudes(), p)?.value)
}

struct RestartResult {
    value: f64,
    state: Vec<Complex64>,
    converged: bool,
}

/// One local ascent from `start`.
///
/// `φ ↦ ‖S(|φ⟩⟨φ|)‖_p^p` is convex in `|φ⟩⟨φ|`, so moving to the top
/// eigenvector of its gradient never decreases the value.
fn ascend(ch: &Channel, start: Vec<Complex64>, p: Exponent, cfg: &AscentConfig) -> Result<RestartResult> {
    let mut state = start;
    let mut eval = evaluate(ch, &state, p)?;
    for _ in 0..cfg.max_iterations {
        let next = eigh(&eval.gradient)?.vector(0);
        let next_eval = evaluate(ch, &next, p)?;
        let gain = next_eval.value - eval.value;
        if gain > 0.0 {
            state = next;
            eval = next_eval;
        }
        if gain < cfg.tol {
            return Ok(RestartResult { value: eval.value, state, converged: true });
        }
    }
    Ok(RestartResult { value: eval.value, state, converged: false })
}

/// Numerical `ν_p`: the largest output p-norm over pure inputs found by a
/// seeded multistart ascent. The value is always achieved, hence a lower bound.
pub fn nu_p_numeric(ch: &Channel, p: Exponent, cfg: &AscentConfig, seed: u64) -> Result<PurityReport> {
    nu_p_numeric_with_starts(ch, p, cfg, seed, &[])
}

/// As [`nu_p_numeric`], additionally ascending from each of `warm_starts`
/// (these come after the random restarts in the restart order).
pub fn nu_p_numeric_with_starts(
    ch: &Channel,
    p: Exponent,
    cfg: &AscentConfig,
    seed: u64,
    warm_starts: &[PureState],
) -> Result<PurityReport> {
    if let Exponent::Finite(x) = p {
        Exponent::finite(x)?;
    }
    if cfg.restarts == 0 && warm_starts.is_empty() {
        return Err(Error::InvalidDimension("at least one restart is required".into()));
    }
    if let Some(w) = warm_starts.iter().find(|w| w.dim() != ch.dim_in()) {
        return Err(Error::DimensionMismatch(format!("warm start has dim {}, channel expects {}", w.dim(), ch.dim_in())));
    }
    let total = cfg.restarts + warm_starts.len();
    let results: Vec<RestartResult> = (0..total)
        .into_par_iter()
        .map(|r| {
            let start = if r < cfg.restarts {
                haar_state(&mut rng_for(seed, r as u64), ch.dim_in()).into_amplitudes()
            } else {
                warm_starts[r - cfg.restarts].amplitudes().to_vec()
            };
            ascend(ch, start, p, cfg)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    let restart_values = results.iter().map(|r| r.value).collect();
    let winner = &results[best];
    Ok(PurityReport {
        p,
        value: winner.value,
        maximizer: PureState::normalized(winner.state.clone())?,
        restarts_used: total,
        converged: winner.converged,
        restart_values,
    })
}

/// The operator `(d−1)^{-2}(𝟙 − 𝟙⊗ρ − ρ⊗𝟙 + |Φ⟩⟨Φ|)` for `Φ = Σ c_α|αα⟩`,
/// assembled densely. Coefficients need not be sorted.
pub fn ss_output_matrix(coeffs: &[f64]) -> ComplexMatrix {
    let d = coeffs.len();
    let n = d * d;
    let scale = 1.0 / ((d as f64 - 1.0) * (d as f64 - 1.0));
    let mut phi = vec![ZERO; n];
    for (a, &c) in coeffs.iter().enumerate() {
        phi[a * d + a] = Complex64::new(c, 0.0);
    }
    ComplexMatrix::from_fn(n, n, |r, s| {
        let (a, b) = (r / d, r % d);
        let mut v = phi[r] * phi[s].conj();
        if r == s {
            v += Complex64::new(1.0 - coeffs[a] * coeffs[a] - coeffs[b] * coeffs[b], 0.0);
        }
        v * scale
    })
}

/// Spectrum of `S⊗S(|Φ⟩⟨Φ|)` for the Werner-Holevo channel.
///
/// Off `span{|αα⟩}` the operator is diagonal with entries `1 − c_α² − c_β²`;
/// on that span it is `diag(1 − 2c_α²) + c cᵀ`.
pub fn ss_output_spectrum(c: &SchmidtVector) -> Result<Spectrum> {
    let d = c.d();
    if d < 2 {
        return Err(Error::InvalidDimension("Schmidt vector needs d >= 2".into()));
    }
    let sq: Vec<f64> = c.coeffs().iter().map(|x| x * x).collect();
    let scale = 1.0 / ((d as f64 - 1.0) * (d as f64 - 1.0));
    let mut values = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            if a != b {
                values.push((1.0 - sq[a] - sq[b]) * scale);
            }
        }
    }
    let cs = c.coeffs();
    let block = ComplexMatrix::from_fn(d, d, |a, b| {
        let diag = if a == b { 1.0 - 2.0 * sq[a] } else { 0.0 };
        Complex64::new((diag + cs[a] * cs[b]) * scale, 0.0)
    });
    values.extend_from_slice(eig_hermitian(&block)?.values());
    Ok(Spectrum::from_values(values))
}

/// `Δ(p,Φ) = ln‖S⊗S(|Φ⟩⟨Φ|)‖_p − 2 ln ν_p(S)` for the Werner-Holevo channel.
/// Positive values certify a violation of multiplicativity.
pub fn delta(p: Exponent, c: &SchmidtVector) -> Result<f64> {
    let nu = nu_p_wh_analytic(c.d(), p)?;
    let norm = spectrum_norm(&ss_output_spectrum(c)?, p)?;
    Ok(norm.ln() - 2.0 * nu.ln())
}

/// Closed-form `Δ(p, Φ_m)` at `d = 3`: `ln(4/3) + (1/p) ln(1/4 + 2^{1−2p})`.
pub fn delta_max_entangled(p: Exponent) -> Result<f64> {
    let base = (4.0f64 / 3.0).ln();
    match p {
        Exponent::Infinity => Ok(base),
        Exponent::Finite(x) => {
            Exponent::finite(x)?;
            Ok(base + (0.25 + 2f64.powf(1.0 - 2.0 * x)).ln() / x)
        }
    }
}

/// Bracket used by [`find_p0`].
pub const P0_BRACKET: (f64, f64) = (2.0, 10.0);

/// Zero of `Δ(p, Φ_m)` by bisection on [`P0_BRACKET`].
pub fn find_p0(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidDimension(format!("tolerance must be positive, got {tol}")));
    }
    let f = |p: f64| delta_max_entangled(Exponent::Finite(p));
    let (mut lo, mut hi) = P0_BRACKET;
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if (hi - lo <= tol && f_mid.abs() <= tol) || mid <= lo || mid >= hi || f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// `(p, Δ(p, Φ_m))` at `steps` evenly spaced exponents in `[p_min, p_max]`.
pub fn delta_sweep(p_min: f64, p_max: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if !(p_min > 1.0 && p_max >= p_min && p_max.is_finite()) || steps == 0 || (steps == 1 && p_max != p_min) {
        return Err(Error::InvalidExponent(format!("bad sweep range [{p_min}, {p_max}] with {steps} steps")));
    }
    (0..steps)
        .map(|i| {
            let p = if steps == 1 { p_min } else { p_min + (p_max - p_min) * i as f64 / (steps - 1) as f64 };
            Ok((p, delta_max_entangled(Exponent::finite(p)?)?))
        })
        .collect()
}

/// Consecutive sweep rows between which `Δ` changes sign.
pub fn sign_changes(rows: &[(f64, f64)]) -> Vec<(f64, f64)> {
    rows.windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub c1sq: f64,
    pub c2sq: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtScan {
    pub p: Exponent,
    pub grid_n: usize,
    pub rows: Vec<ScanRow>,
    /// Index of the first row attaining the maximum.
    pub argmax: usize,
}

impl SchmidtScan {
    pub fn best(&self) -> &ScanRow {
        &self.rows[self.argmax]
    }
}

impl ScanRow {
    pub fn c3sq(&self) -> f64 {
        (1.0 - self.c1sq - self.c2sq).max(0.0)
    }

    /// One Schmidt coefficient carries all the weight.
    pub fn is_corner(&self) -> bool {
        [self.c1sq, self.c2sq, self.c3sq()].iter().any(|&s| (s - 1.0).abs() < 1e-12)
    }

    pub fn is_center(&self) -> bool {
        [self.c1sq, self.c2sq, self.c3sq()].iter().all(|&s| (s - 1.0 / 3.0).abs() < 1e-12)
    }
}

/// `Δ(p, Φ)` for `d = 3` over the grid `c₁² = i/n, c₂² = j/n`, `i + j ≤ n`.
pub fn schmidt_scan(p: Exponent, grid_n: usize) -> Result<SchmidtScan> {
    if grid_n == 0 {
        return Err(Error::InvalidDimension("grid_n must be positive".into()));
    }
    let n = grid_n;
    let points: Vec<(usize, usize)> = (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j))).collect();
    let rows: Vec<ScanRow> = points
        .par_iter()
        .map(|&(i, j)| {
            let squares = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
            let c = SchmidtVector::from_squares(&squares)?;
            Ok(ScanRow { c1sq: squares[0], c2sq: squares[1], delta: delta(p, &c)? })
        })
        .collect::<Result<_>>()?;
    let mut argmax = 0;
    for (k, r) in rows.iter().enumerate() {
        if r.delta > rows[argmax].delta {
            argmax = k;
        }
    }
    Ok(SchmidtScan { p, grid_n, rows, argmax })
}

/// Schmidt coefficients of a pure state on `C^{d1} ⊗ C^{d2}`, descending.
pub fn schmidt_coefficients(state: &PureState, dims: (usize, usize)) -> Result<Vec<f64>> {
    let (d1, d2) = dims;
    if state.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!("state of dim {} is not {d1}x{d2}", state.dim())));
    }
    let m = ComplexMatrix::from_vec(d1, d2, state.amplitudes().to_vec())?;
    let rho = m.matmul(&m.adjoint());
    Ok(eig_hermitian(&rho)?.values().iter().map(|l| l.max(0.0).sqrt()).collect())
}
