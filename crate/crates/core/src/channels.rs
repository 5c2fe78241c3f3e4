//! Quantum channels in Kraus form and the Werner-Holevo channel.
//!
//! A [`Channel`] maps `dim_in x dim_in` density matrices to `dim_out x dim_out`
//! ones via `ρ ↦ Σ_x A_x ρ A_x†`. Complete positivity is automatic in this
//! form; trace preservation is checked at construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, ComplexMatrix, Subsystem, ONE};
pub use crate::tensor::TensorVector;

/// Trace-preservation tolerance on `‖Σ A_x†A_x − 𝟙‖_F`.
pub const TOL_TP: f64 = 1e-10;
/// Unitarity tolerance for covariance checks.
pub const TOL_UNITARY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    /// Builds a channel, rejecting Kraus families that are not trace preserving.
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::new_unchecked(dim_in, dim_out, kraus)?;
        let r = ch.tp_residual();
        if r > TOL_TP {
            return Err(Error::InvalidDimension(format!("Kraus family is not trace preserving (residual {r:e})")));
        }
        Ok(ch)
    }

    /// Shape checks only. Used for loading families that are then verified.
    pub fn new_unchecked(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidDimension("channel dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidDimension("empty Kraus family".into()));
        }
        for (x, a) in kraus.iter().enumerate() {
            if a.rows() != dim_out || a.cols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {x} is {}x{}, expected {dim_out}x{dim_in}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { dim_in, dim_out, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, kraus: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `‖Σ A_x†A_x − 𝟙‖_F`.
    pub fn tp_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.kraus {
            sum = &sum + &a.adjoint().matmul(a);
        }
        (&sum - &ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.rows() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects {0}x{0} input, got {1}x{2}",
                self.dim_in,
                rho.rows(),
                rho.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            out = &out + &a.matmul(rho).matmul(&a.adjoint());
        }
        Ok(out)
    }

    /// Heisenberg-picture dual `X ↦ Σ A_x† X A_x`.
    pub fn apply_adjoint(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "dual channel expects {0}x{0} input, got {1}x{2}",
                self.dim_out,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.kraus {
            out = &out + &a.adjoint().matmul(x).matmul(a);
        }
        Ok(out)
    }

    /// Output for the pure input `|φ⟩⟨φ|`, computed as `Σ_x (A_xφ)(A_xφ)†`.
    pub fn apply_pure(&self, phi: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            let v = a.matvec(phi);
            out = &out + &ComplexMatrix::outer(&v, &v);
        }
        out
    }

    /// Product channel with Kraus family `{A_x ⊗ B_y}`.
    pub fn tensor(&self, other: &Self) -> Self {
        let kraus = self.kraus.iter().flat_map(|a| other.kraus.iter().map(move |b| kron(a, b))).collect();
        Self { dim_in: self.dim_in * other.dim_in, dim_out: self.dim_out * other.dim_out, kraus }
    }

    /// `(id ⊗ S)(Σ_{jk} |jj⟩⟨kk|)`, unnormalized.
    pub fn choi(&self) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(n * m, n * m);
        for j in 0..n {
            for k in 0..n {
                let block = self.apply(&ComplexMatrix::unit(n, j, k)).expect("square unit input");
                for a in 0..m {
                    for b in 0..m {
                        out[(j * m + a, k * m + b)] = block[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// `‖tr_out(choi) − 𝟙‖_F`; zero iff trace preserving.
    pub fn choi_tp_residual(&self) -> f64 {
        let reduced = partial_trace(&self.choi(), (self.dim_in, self.dim_out), Subsystem::First).expect("consistent dims");
        (&reduced - &ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    /// The vector with components `⟨h_j, A_x e_k⟩`, dims `(#kraus, dim_out, dim_in)`.
    pub fn to_vector(&self) -> TensorVector {
        let amps = self.kraus.iter().flat_map(|a| a.as_slice().iter().copied()).collect();
        TensorVector::new(vec![self.kraus.len(), self.dim_out, self.dim_in], amps).expect("consistent shape")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChannelFile::from(self)).expect("serializable")
    }

    /// Parses and checks trace preservation.
    pub fn from_json(s: &str) -> Result<Self> {
        let ch = Self::from_json_unchecked(s)?;
        let r = ch.tp_residual();
        if r > TOL_TP {
            return Err(Error::Parse(format!("Kraus family is not trace preserving (residual {r:e})")));
        }
        Ok(ch)
    }

    pub fn from_json_unchecked(s: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

/// Free function form of [`Channel::apply`].
pub fn apply(ch: &Channel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    ch.apply(rho)
}

pub fn tensor(a: &Channel, b: &Channel) -> Channel {
    a.tensor(b)
}

pub fn choi(ch: &Channel) -> ComplexMatrix {
    ch.choi()
}

pub fn channel_to_vector(ch: &Channel) -> TensorVector {
    ch.to_vector()
}

/// Werner-Holevo channel on `d x d` matrices, `d ≥ 3`.
///
/// Kraus operators are `(|i⟩⟨j| − |j⟩⟨i|)/√(d−1)`, one per pair `i < j`.
pub fn wh_channel(d: usize) -> Result<Channel> {
    if d < 3 {
        return Err(Error::InvalidDimension(format!("Werner-Holevo channel needs d >= 3, got {d}")));
    }
    let w = 1.0 / (d as f64 - 1.0).sqrt();
    let mut kraus = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            let mut a = ComplexMatrix::zeros(d, d);
            a[(i, j)] = Complex64::new(w, 0.0);
            a[(j, i)] = Complex64::new(-w, 0.0);
            kraus.push(a);
        }
    }
    Channel::new(d, d, kraus)
}

/// `(tr(ρ)𝟙 − ρ^T)/(d−1)`, evaluated directly.
pub fn wh_linear_form(rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.rows();
    let id = ComplexMatrix::identity(d).scale(rho.trace());
    (&id - &rho.transpose()).scale_real(1.0 / (d as f64 - 1.0))
}

/// `‖S(UρU†) − Ū S(ρ) Ū†‖_F`, where `Ū†` equals `U^T`.
pub fn verify_covariance(ch: &Channel, u: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    let defect = u.unitarity_defect();
    if defect > TOL_UNITARY || defect.is_nan() {
        return Err(Error::NotUnitary(defect));
    }
    if u.rows() != ch.dim_in || ch.dim_in != ch.dim_out {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} unitary for a channel on {}x{} matrices",
            u.rows(),
            u.cols(),
            ch.dim_in,
            ch.dim_out
        )));
    }
    let lhs = ch.apply(&u.matmul(rho).matmul(&u.adjoint()))?;
    let ubar = u.conj();
    let rhs = ubar.matmul(&ch.apply(rho)?).matmul(&u.transpose());
    Ok((&lhs - &rhs).frobenius_norm())
}

/// `|tr(A† S(B)) − tr(S(A)† B)|`.
pub fn verify_hs_hermitian(ch: &Channel, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if ch.dim_in != ch.dim_out {
        return Err(Error::DimensionMismatch("Hilbert-Schmidt hermiticity needs dim_in == dim_out".into()));
    }
    let lhs = a.hs_inner(&ch.apply(b)?);
    let rhs = ch.apply(a)?.hs_inner(b);
    Ok((lhs - rhs).norm())
}

/// On-disk layout: row-major matrices with `[re, im]` entries.
#[derive(Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&Channel> for ChannelFile {
    fn from(ch: &Channel) -> Self {
        let kraus = ch
            .kraus
            .iter()
            .map(|a| (0..a.rows()).map(|i| a.row(i).iter().map(|z| [z.re, z.im]).collect()).collect())
            .collect();
        Self { dim_in: ch.dim_in, dim_out: ch.dim_out, kraus }
    }
}

impl TryFrom<ChannelFile> for Channel {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        let mut kraus = Vec::with_capacity(f.kraus.len());
        for (x, rows) in f.kraus.into_iter().enumerate() {
            if rows.len() != f.dim_out || rows.iter().any(|r| r.len() != f.dim_in) {
                return Err(Error::Parse(format!("Kraus operator {x} is not {}x{}", f.dim_out, f.dim_in)));
            }
            let data = rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)).collect();
            kraus.push(ComplexMatrix::from_vec(f.dim_out, f.dim_in, data)?);
        }
        Channel::new_unchecked(f.dim_in, f.dim_out, kraus).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `ρ ↦ tr(ρ)|0⟩⟨0|`; trace preserving but neither unitarily covariant nor self-dual.
pub fn reset_channel(d: usize) -> Channel {
    let kraus = (0..d)
        .map(|k| {
            let mut a = ComplexMatrix::zeros(d, d);
            a[(0, k)] = ONE;
            a
        })
        .collect();
    Channel { dim_in: d, dim_out: d, kraus }
}

/// Completely dephasing channel `ρ ↦ diag(ρ)`.
pub fn dephasing_channel(d: usize) -> Channel {
    let kraus = (0..d).map(|k| ComplexMatrix::unit(d, k, k)).collect();
    Channel { dim_in: d, dim_out: d, kraus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, PureState, ZERO};
    use crate::random::{haar_state, haar_unitary, random_density, rng_for};

    #[test]
    fn wh3_kraus_family() {
        let ch = wh_channel(3).unwrap();
        assert_eq!(ch.kraus().len(), 3);
        for a in ch.kraus() {
            assert!(a.max_abs_diff(&a.transpose().scale_real(-1.0)) == 0.0);
        }
        assert!(ch.tp_residual() < 1e-12);
    }

    #[test]
    fn wh_rejects_small_d() {
        assert!(matches!(wh_channel(2), Err(Error::InvalidDimension(_))));
        assert!(wh_channel(0).is_err());
    }

    #[test]
    fn wh3_on_basis_state() {
        let out = wh_channel(3).unwrap().apply(&ComplexMatrix::unit(3, 0, 0)).unwrap();
        let expected = (&ComplexMatrix::identity(3) - &ComplexMatrix::unit(3, 0, 0)).scale_real(0.5);
        assert!(out.max_abs_diff(&expected) < 1e-15);
        let s = eig_hermitian(&out).unwrap();
        for (got, want) in s.values().iter().zip([0.5, 0.5, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn wh_output_uses_conjugated_input() {
        let mut rng = rng_for(11, 0);
        let phi = haar_state(&mut rng, 3);
        let out = wh_channel(3).unwrap().apply(&phi.projector()).unwrap();
        let expected = (&ComplexMatrix::identity(3) - &phi.conj().projector()).scale_real(0.5);
        assert!(out.max_abs_diff(&expected) < 1e-14);
        // and not the unconjugated one, for complex φ
        let wrong = (&ComplexMatrix::identity(3) - &phi.projector()).scale_real(0.5);
        assert!(out.max_abs_diff(&wrong) > 1e-3);
    }

    #[test]
    fn kraus_matches_linear_form_d4() {
        let ch = wh_channel(4).unwrap();
        let mut rng = rng_for(5, 0);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 4);
            assert!(ch.apply(&rho).unwrap().max_abs_diff(&wh_linear_form(&rho)) < 1e-12);
        }
    }

    #[test]
    fn identity_channel_and_fixed_point() {
        let mut rng = rng_for(2, 0);
        let rho = random_density(&mut rng, 3);
        assert_eq!(Channel::identity(3).apply(&rho).unwrap(), rho);
        let mixed = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        let out = wh_channel(3).unwrap().apply(&mixed).unwrap();
        assert!(out.max_abs_diff(&mixed) < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        let ch = wh_channel(3).unwrap();
        assert!(matches!(ch.apply(&ComplexMatrix::identity(4)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn identity_tensor_identity() {
        let t = Channel::identity(2).tensor(&Channel::identity(3));
        assert_eq!(t, Channel::identity(6));
    }

    #[test]
    fn wh3_squared_on_maximally_entangled_state() {
        let ch = wh_channel(3).unwrap();
        let ss = ch.tensor(&ch);
        let mut amps = vec![ZERO; 9];
        for a in 0..3 {
            amps[4 * a] = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        }
        let phi = PureState::new(amps).unwrap();
        let s = eig_hermitian(&ss.apply(&phi.projector()).unwrap()).unwrap();
        assert!((s.values()[0] - 1.0 / 3.0).abs() < 1e-12);
        for v in &s.values()[1..] {
            assert!((v - 1.0 / 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_choi_is_rank_one() {
        let s = eig_hermitian(&Channel::identity(2).choi()).unwrap();
        for (got, want) in s.values().iter().zip([2.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn wh3_choi_is_antisymmetric_projector() {
        let choi = wh_channel(3).unwrap().choi();
        let s = eig_hermitian(&choi).unwrap();
        // three equal nonzero eigenvalues (the antisymmetric subspace of C^3⊗C^3), six zeros
        let top = s.values()[0];
        assert!(top > 0.1);
        for v in &s.values()[..3] {
            assert!((v - top).abs() < 1e-12);
        }
        for v in &s.values()[3..] {
            assert!(v.abs() < 1e-12);
        }
        // Choi = (𝟙 − SWAP)/(d−1) = 2/(d−1)·P_antisym
        let swap = ComplexMatrix::from_fn(9, 9, |r, c| if r == (c % 3) * 3 + c / 3 { ONE } else { ZERO });
        let proj = (&ComplexMatrix::identity(9) - &swap).scale_real(0.5);
        assert!(choi.max_abs_diff(&proj.scale_real(top)) < 1e-12);
    }

    #[test]
    fn wh4_choi_is_trace_preserving() {
        assert!(wh_channel(4).unwrap().choi_tp_residual() < 1e-12);
    }

    #[test]
    fn covariance_holds_for_wh_and_fails_for_reset() {
        let mut rng = rng_for(9, 0);
        let ch = wh_channel(3).unwrap();
        let rho = random_density(&mut rng, 3);
        assert_eq!(verify_covariance(&ch, &ComplexMatrix::identity(3), &rho).unwrap(), 0.0);
        let u = haar_unitary(&mut rng, 3);
        assert!(verify_covariance(&ch, &u, &rho).unwrap() < 1e-10);

        let swap01 = ComplexMatrix::from_fn(3, 3, |i, j| if [1, 0, 2][i] == j { ONE } else { ZERO });
        let r = verify_covariance(&reset_channel(3), &swap01, &ComplexMatrix::unit(3, 2, 2)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn covariance_rejects_non_unitary() {
        let ch = wh_channel(3).unwrap();
        let m = ComplexMatrix::identity(3).scale_real(2.0);
        assert!(matches!(verify_covariance(&ch, &m, &m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn hs_hermiticity() {
        let mut rng = rng_for(4, 0);
        let ch = wh_channel(3).unwrap();
        let id = ComplexMatrix::identity(3);
        assert_eq!(verify_hs_hermitian(&ch, &id, &id).unwrap(), 0.0);
        let a = crate::random::random_matrix(&mut rng, 3, 3);
        let b = crate::random::random_matrix(&mut rng, 3, 3);
        assert!(verify_hs_hermitian(&ch, &a, &b).unwrap() < 1e-10);

        let nonself = Channel::new(2, 2, vec![ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 0, 1)]).unwrap();
        let a = crate::random::random_matrix(&mut rng, 2, 2);
        let b = crate::random::random_matrix(&mut rng, 2, 2);
        assert!(verify_hs_hermitian(&nonself, &a, &b).unwrap() > 1e-3);
        assert!(verify_hs_hermitian(&ch, &ComplexMatrix::identity(2), &b).is_err());
    }

    #[test]
    fn identity_channel_vector() {
        let v = Channel::identity(2).to_vector();
        assert_eq!(v.dims(), &[1, 2, 2]);
        assert_eq!(v.amplitudes(), ComplexMatrix::identity(2).as_slice());
        assert!((v.norm().powi(2) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn wh3_vector_is_epsilon_up_to_kraus_signs() {
        let v = wh_channel(3).unwrap().to_vector();
        assert_eq!(v.dims(), &[3, 3, 3]);
        assert!((v.norm().powi(2) - 3.0).abs() < 1e-14);
        // Kraus x ↔ pair (0,1),(0,2),(1,2) ↔ missing index m = 2,1,0
        let missing = [2usize, 1, 0];
        let sign = [1.0, -1.0, 1.0];
        for x in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = levi_civita(missing[x], j, k);
                    let expected = sign[x] * eps / 2f64.sqrt();
                    assert!((v.get(&[x, j, k]) - Complex64::new(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn tensor_channel_vector_is_regrouped_product() {
        let ch = wh_channel(3).unwrap();
        let a = ch.to_vector();
        let aa = ch.tensor(&ch).to_vector();
        assert_eq!(aa.dims(), &[9, 9, 9]);
        assert_eq!(aa, a.regrouped_product(&a).unwrap());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let ch = wh_channel(3).unwrap();
        assert_eq!(Channel::from_json(&ch.to_json()).unwrap(), ch);
        let broken = r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]}"#;
        assert!(matches!(Channel::from_json(broken), Err(Error::Parse(_))));
        let loaded = Channel::from_json_unchecked(broken).unwrap();
        assert!(loaded.tp_residual() > 0.1);
        assert!(Channel::from_json("{\"dim_in\":2}").is_err());
        let ragged = r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1,0]],[[0,0],[1,0]]]]}"#;
        assert!(Channel::from_json(ragged).is_err());
    }
}
