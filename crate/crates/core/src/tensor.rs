use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, kron_slices, vec_norm, PureState, ZERO};

/// Vector in `C^{d_1} ⊗ ... ⊗ C^{d_N}`, amplitudes in row-major multi-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl TensorVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDimension(format!("bad factor dimensions {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if total != amplitudes.len() {
            return Err(Error::ShapeMismatch(format!(
                "dims {dims:?} need {total} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let total = dims.iter().product();
        Self::new(dims, vec![ZERO; total])
    }

    /// `φ_1 ⊗ ... ⊗ φ_N`.
    pub fn product(factors: &[PureState]) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::InvalidDimension("no factors".into()))?;
        let mut amps = first.amplitudes().to_vec();
        for f in &factors[1..] {
            amps = kron_slices(&amps, f.amplitudes());
        }
        Self::new(factors.iter().map(PureState::dim).collect(), amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| {
            debug_assert!(i < d);
            acc * d + i
        })
    }

    pub fn get(&self, index: &[usize]) -> Complex64 {
        self.amplitudes[self.flat_index(index)]
    }

    pub fn set(&mut self, index: &[usize], value: Complex64) {
        let k = self.flat_index(index);
        self.amplitudes[k] = value;
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dims: self.dims.clone(), amplitudes: self.amplitudes.iter().map(|a| a * c).collect() }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidDimension("cannot normalize a zero tensor".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Tensor product with factor `α` of `self` grouped with factor `α` of `other`,
    /// giving a vector on `(H_1⊗K_1) ⊗ ... ⊗ (H_N⊗K_N)`.
    pub fn regrouped_product(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::ShapeMismatch(format!(
                "cannot regroup an order-{} tensor with an order-{} tensor",
                self.order(),
                other.order()
            )));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a * b).collect();
        let mut out = Self::zeros(dims)?;
        let n = self.order();
        let mut idx = vec![0usize; n];
        for (fa, &a) in self.amplitudes.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let ia = unflatten(fa, &self.dims);
            for (fb, &b) in other.amplitudes.iter().enumerate() {
                let ib = unflatten(fb, &other.dims);
                for k in 0..n {
                    idx[k] = ia[k] * other.dims[k] + ib[k];
                }
                out.set(&idx, a * b);
            }
        }
        Ok(out)
    }

    /// Applies `ops[k]` (a square matrix on factor `k`) to every factor.
    pub fn apply_local(&self, ops: &[crate::linalg::ComplexMatrix]) -> Result<Self> {
        if ops.len() != self.order() || ops.iter().zip(&self.dims).any(|(u, &d)| u.rows() != d || u.cols() != d) {
            return Err(Error::ShapeMismatch("local operators do not match factor dimensions".into()));
        }
        let mut amps = self.amplitudes.clone();
        let total = amps.len();
        let mut stride = total;
        for (k, op) in ops.iter().enumerate() {
            let d = self.dims[k];
            stride /= d;
            let block = d * stride;
            let mut next = vec![ZERO; total];
            for base in (0..total).step_by(block) {
                for inner_off in 0..stride {
                    for i in 0..d {
                        let mut acc = ZERO;
                        for j in 0..d {
                            acc += op[(i, j)] * amps[base + j * stride + inner_off];
                        }
                        next[base + i * stride + inner_off] = acc;
                    }
                }
            }
            amps = next;
        }
        Self::new(self.dims.clone(), amps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TensorVectorFile::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: TensorVectorFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

pub fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
    idx
}

/// On-disk layout: `{ "dims": [..], "amplitudes": [[re, im], ...] }`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TensorVectorFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&TensorVector> for TensorVectorFile {
    fn from(v: &TensorVector) -> Self {
        Self { dims: v.dims.clone(), amplitudes: v.amplitudes.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<TensorVectorFile> for TensorVector {
    type Error = Error;

    fn try_from(f: TensorVectorFile) -> Result<Self> {
        TensorVector::new(f.dims, f.amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(|e| Error::Parse(e.to_string()))
    }
}
