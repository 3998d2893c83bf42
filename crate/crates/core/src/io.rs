//! JSON documents for matrices, states, effects and channels.
//!
//! Matrix: `{"kind"?: "state"|"effect"|"probvec", "dims": [m] | [m, n],
//! "entries": [[[re, im], ...], ...]}` in row-major order. Probability
//! vectors may give `"probs": [...]` instead of `entries`.
//!
//! Channel: `{"in_dim": n, "out_dim": k, "repr": "choi"|"kraus", "data": ...}`
//! where `data` holds one entries array (Choi) or a list of them (Kraus).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, HermitianMatrix};
use crate::state::{DensityMatrix, Effect, ProbabilityVector};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> Complex64 {
        match self {
            Entry::Complex([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        Entry::Complex([z.re, z.im])
    }
}

pub type Entries = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    State,
    Effect,
    Probvec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MatrixKind>,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Entries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDocument(msg.into())
}

pub fn entries_to_matrix(entries: &Entries) -> Result<CMatrix> {
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(invalid("empty entries"));
    }
    if entries.iter().any(|r| r.len() != cols) {
        return Err(invalid("ragged entries"));
    }
    let m = CMatrix::from_fn(rows, cols, |r, c| entries[r][c].value());
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("non-finite entry"));
    }
    Ok(m)
}

pub fn matrix_to_entries(m: &CMatrix) -> Entries {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)].into()).collect())
        .collect()
}

impl MatrixDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        doc.check_dims()?;
        Ok(doc)
    }

    pub fn from_hermitian(m: &HermitianMatrix, kind: Option<MatrixKind>, dims: Vec<usize>) -> Self {
        MatrixDocument {
            kind,
            dims,
            entries: Some(matrix_to_entries(m.as_matrix())),
            probs: None,
        }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self::from_hermitian(rho.matrix(), Some(MatrixKind::State), vec![rho.dim()])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    fn check_dims(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.len() > 2 || self.dims.contains(&0) {
            return Err(invalid(format!("dims must be [m] or [m, n], got {:?}", self.dims)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Bipartite factorization, if declared.
    pub fn bipartite(&self) -> Option<(usize, usize)> {
        match self.dims.as_slice() {
            [m, n] => Some((*m, *n)),
            _ => None,
        }
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        self.check_dims()?;
        let m = match (&self.entries, &self.probs) {
            (Some(e), None) => entries_to_matrix(e)?,
            (None, Some(p)) => return self.sized(HermitianMatrix::from_real_diagonal(p)),
            (Some(_), Some(_)) => return Err(invalid("give either entries or probs, not both")),
            (None, None) => return Err(invalid("missing entries")),
        };
        let h = HermitianMatrix::new(m)?;
        self.sized(h)
    }

    fn sized(&self, h: HermitianMatrix) -> Result<HermitianMatrix> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: h.dim(),
            });
        }
        Ok(h)
    }

    pub fn to_state(&self, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
        if matches!(self.kind, Some(MatrixKind::Effect)) {
            return Err(invalid("document declares an effect, expected a state"));
        }
        DensityMatrix::new(self.to_hermitian()?, cfg)
    }

    pub fn to_effect(&self, cfg: &ToleranceConfig) -> Result<Effect> {
        if matches!(self.kind, Some(MatrixKind::State | MatrixKind::Probvec)) {
            return Err(invalid("document declares a state, expected an effect"));
        }
        Effect::new(self.to_hermitian()?, cfg)
    }

    /// Diagonal of the document as a probability vector; off-diagonal
    /// entries must vanish.
    pub fn to_probability_vector(&self) -> Result<ProbabilityVector> {
        if let (Some(p), None) = (&self.probs, &self.entries) {
            if p.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    actual: p.len(),
                });
            }
            return ProbabilityVector::new(p.clone());
        }
        let h = self.to_hermitian()?;
        if h.off_diagonal_norm() > crate::hermitian::HERMITIAN_ATOL {
            return Err(invalid("matrix is not diagonal"));
        }
        ProbabilityVector::new(h.diagonal())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelRepr {
    Choi,
    Kraus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub in_dim: usize,
    pub out_dim: usize,
    pub repr: ChannelRepr,
    pub data: serde_json::Value,
}

impl ChannelDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_channel(ch: &Channel, repr: ChannelRepr) -> Self {
        let data = match repr {
            ChannelRepr::Choi => serde_json::to_value(matrix_to_entries(ch.choi().matrix().as_matrix())),
            ChannelRepr::Kraus => serde_json::to_value(ch.kraus().iter().map(matrix_to_entries).collect::<Vec<_>>()),
        }
        .expect("entries serialize");
        ChannelDocument {
            in_dim: ch.in_dim(),
            out_dim: ch.out_dim(),
            repr,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_channel(&self, cfg: &ToleranceConfig) -> Result<Channel> {
        if self.in_dim == 0 || self.out_dim == 0 {
            return Err(invalid("channel dimensions must be positive"));
        }
        match self.repr {
            ChannelRepr::Choi => {
                let e: Entries = serde_json::from_value(self.data.clone())?;
                let j = HermitianMatrix::new(entries_to_matrix(&e)?)?;
                Channel::from_choi(self.in_dim, self.out_dim, j, cfg)
            }
            ChannelRepr::Kraus => {
                let list: Vec<Entries> = serde_json::from_value(self.data.clone())?;
                let kraus = list.iter().map(entries_to_matrix).collect::<Result<Vec<_>>>()?;
                Channel::from_kraus(self.in_dim, self.out_dim, kraus, cfg)
            }
        }
    }
}
