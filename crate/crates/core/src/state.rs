//! Density matrices, effects, probability vectors and their spectral
//! features.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{psd_verdict, CMatrix, CVector, HermitianMatrix, Spectrum};
use crate::tolerance::ToleranceConfig;

/// States whose trace is within this of 1 are accepted unchanged.
pub const TRACE_TOL: f64 = 1e-9;
/// States whose trace is off by less than this are renormalized with a
/// warning; anything further off is rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;
/// Probability vectors must sum to one within this.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Trace-one positive semidefinite operator with a cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
}

/// Operator `E` with `0 ≤ E ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

/// Subspace of `C^n` given by an orthonormal set of columns (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    pub space: Subspace,
}

fn check_trace(trace: f64) -> Result<Option<f64>> {
    let dev = (trace - 1.0).abs();
    if !trace.is_finite() || dev >= RENORMALIZE_TOL {
        return Err(Error::BadTrace(trace));
    }
    if dev >= TRACE_TOL {
        log::warn!("renormalizing input with trace {trace}");
        return Ok(Some(trace));
    }
    Ok(None)
}

/// Indices of the eigenvalues clustered with the largest one.
fn top_cluster(spec: &Spectrum, cfg: &ToleranceConfig) -> Vec<usize> {
    let top = spec.max();
    let width = cfg.cluster_width * top.abs();
    (0..spec.dim()).filter(|&i| top - spec.values()[i] <= width).collect()
}

fn columns(spec: &Spectrum, idx: &[usize]) -> CMatrix {
    let n = spec.dim();
    CMatrix::from_fn(n, idx.len(), |r, c| spec.vectors()[(r, idx[c])])
}

impl DensityMatrix {
    /// Validates positivity and unit trace. Traces off by less than
    /// [`RENORMALIZE_TOL`] are rescaled.
    pub fn new(matrix: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let matrix = match check_trace(matrix.trace())? {
            Some(tr) => matrix.scale(1.0 / tr),
            None => matrix,
        };
        Self::from_trace_one(matrix, cfg)
    }

    /// Divides by the trace before validating; for operators that are
    /// positive by construction but unnormalized.
    pub fn normalized(matrix: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let tr = matrix.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::BadTrace(tr));
        }
        Self::from_trace_one(matrix.scale(1.0 / tr), cfg)
    }

    fn from_trace_one(matrix: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let spectrum = matrix.eig();
        let verdict = psd_verdict(&spectrum, cfg);
        if verdict.fails() {
            return Err(Error::NegativeEigenvalue(verdict.slack));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn from_diagonal(probs: &[f64], cfg: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(probs), cfg)
    }

    /// The completely mixed state `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let matrix = HermitianMatrix::identity(n).scale(1.0 / n as f64);
        let spectrum = matrix.eig();
        Self { matrix, spectrum }
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::BadParameter("pure state from zero vector".into()));
        }
        let matrix = HermitianMatrix::outer(&(v / Complex64::new(norm, 0.0)));
        let spectrum = matrix.eig();
        Ok(Self { matrix, spectrum })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.values()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `ρ⁺ = ||ρ||`.
    pub fn top_eigenvalue(&self) -> f64 {
        self.spectrum.max()
    }

    pub fn top_eigenspace(&self, cfg: &ToleranceConfig) -> Eigenspace {
        let idx = top_cluster(&self.spectrum, cfg);
        Eigenspace {
            eigenvalue: self.spectrum.max(),
            space: Subspace::from_orthonormal(columns(&self.spectrum, &idx)),
        }
    }

    fn kernel_threshold(&self, cfg: &ToleranceConfig) -> f64 {
        cfg.rank_cutoff * self.spectrum.max()
    }

    /// Eigenspace of the least nonzero eigenvalue.
    pub fn bottom_eigenspace_nonzero(&self, cfg: &ToleranceConfig) -> Eigenspace {
        let cutoff = self.kernel_threshold(cfg);
        let values = self.spectrum.values();
        let least = values
            .iter()
            .copied()
            .filter(|&l| l > cutoff)
            .fold(f64::INFINITY, f64::min);
        let width = cfg.cluster_width * self.spectrum.max();
        let idx: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] > cutoff && values[i] - least <= width)
            .collect();
        Eigenspace {
            eigenvalue: least,
            space: Subspace::from_orthonormal(columns(&self.spectrum, &idx)),
        }
    }

    pub fn kernel(&self, cfg: &ToleranceConfig) -> Subspace {
        let cutoff = self.kernel_threshold(cfg);
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| self.spectrum.values()[i] <= cutoff)
            .collect();
        Subspace::from_orthonormal(columns(&self.spectrum, &idx))
    }

    pub fn rank(&self, cfg: &ToleranceConfig) -> usize {
        self.dim() - self.kernel(cfg).dim()
    }

    pub fn is_full_rank(&self, cfg: &ToleranceConfig) -> bool {
        self.rank(cfg) == self.dim()
    }

    pub fn support_projector(&self, cfg: &ToleranceConfig) -> HermitianMatrix {
        let cutoff = self.kernel_threshold(cfg);
        self.spectrum.projector(|_, l| l > cutoff)
    }

    /// Spectral power using the cached eigendecomposition; negative powers
    /// are generalized inverses that vanish on the kernel.
    pub fn power(&self, p: f64, cfg: &ToleranceConfig) -> HermitianMatrix {
        self.spectrum.power(p, self.kernel_threshold(cfg))
    }

    /// `H_∞(ρ) = -log ||ρ||` in the configured base.
    pub fn min_entropy(&self, cfg: &ToleranceConfig) -> f64 {
        -cfg.log(self.top_eigenvalue())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let matrix = self.matrix.tensor(&other.matrix);
        let spectrum = matrix.eig();
        Self { matrix, spectrum }
    }

    /// `(1-t)·self + t·other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadParameter(format!("mixing weight {t} outside [0, 1]")));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let matrix = self.matrix.combine(1.0 - t, &other.matrix, t);
        let spectrum = matrix.eig();
        Ok(Self { matrix, spectrum })
    }

    /// `U ρ U†` for a unitary (or isometry) `U`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        let matrix = self.matrix.conjugate_by(u);
        let spectrum = matrix.eig();
        Self { matrix, spectrum }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.distance(&other.matrix)
    }

    /// Ordered spectrum `λ(ρ)` as a probability vector.
    pub fn spectrum_distribution(&self) -> ProbabilityVector {
        let clamped: Vec<f64> = self.eigenvalues().iter().map(|l| l.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        ProbabilityVector {
            probs: clamped.iter().map(|l| l / total).collect(),
        }
    }

    /// Diagonal of the matrix, if it is diagonal within `atol`.
    pub fn as_diagonal(&self, atol: f64) -> Option<ProbabilityVector> {
        if self.matrix.off_diagonal_norm() > atol {
            return None;
        }
        ProbabilityVector::new(self.matrix.diagonal()).ok()
    }
}

impl Effect {
    pub fn new(matrix: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let spectrum = matrix.eig();
        let lower = psd_verdict(&spectrum, cfg);
        if lower.fails() {
            return Err(Error::NotAnEffect(format!(
                "smallest eigenvalue {:e} is negative",
                lower.slack
            )));
        }
        let excess = spectrum.max() - 1.0;
        if excess > 10.0 * cfg.psd_slack {
            return Err(Error::NotAnEffect(format!(
                "largest eigenvalue {} exceeds 1",
                spectrum.max()
            )));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = HermitianMatrix::identity(n);
        let spectrum = matrix.eig();
        Self { matrix, spectrum }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn top_eigenspace(&self, cfg: &ToleranceConfig) -> Eigenspace {
        let idx = top_cluster(&self.spectrum, cfg);
        Eigenspace {
            eigenvalue: self.spectrum.max(),
            space: Subspace::from_orthonormal(columns(&self.spectrum, &idx)),
        }
    }

    /// `E^{1/2}`.
    pub fn sqrt(&self) -> HermitianMatrix {
        self.spectrum.power(0.5, 0.0)
    }
}

impl ProbabilityVector {
    /// Accepts nonnegative entries summing to one within
    /// [`PROB_SUM_TOL`]; sums off by less than [`RENORMALIZE_TOL`] are
    /// rescaled and rounding noise down to `-1e-12` is clamped to zero.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadProbabilityVector("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -PROB_SUM_TOL) {
            return Err(Error::BadProbabilityVector(format!("entry {p} is negative")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = probs.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev >= RENORMALIZE_TOL {
            return Err(Error::BadProbabilityVector(format!("entries sum to {sum}")));
        }
        if dev > PROB_SUM_TOL {
            log::warn!("renormalizing probability vector with sum {sum}");
            return Ok(Self {
                probs: probs.iter().map(|p| p / sum).collect(),
            });
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `x⁺`, the largest component.
    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmax(&self) -> usize {
        let m = self.max();
        self.probs.iter().position(|&p| p == m).unwrap_or(0)
    }

    pub fn to_state(&self, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
        DensityMatrix::from_diagonal(&self.probs, cfg)
    }
}

impl Subspace {
    /// Wraps columns the caller guarantees to be orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        Self { basis }
    }

    /// Orthonormalizes arbitrary spanning columns, dropping dependent ones.
    pub fn span(vectors: &[CVector]) -> Self {
        let n = vectors.first().map_or(0, |v| v.len());
        let mut kept: Vec<CVector> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for q in &kept {
                let overlap = q.dotc(&w);
                w -= q * overlap;
            }
            let norm = w.norm();
            if norm > 1e-10 {
                kept.push(w / Complex64::new(norm, 0.0));
            }
        }
        Self {
            basis: CMatrix::from_fn(n, kept.len(), |r, c| kept[c][r]),
        }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.basis.column(i).into_owned()
    }

    pub fn projector(&self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.basis * self.basis.adjoint())
    }

    /// Distance of `v` (normalized) from the subspace.
    pub fn residual(&self, v: &CVector) -> f64 {
        let v = v / Complex64::new(v.norm(), 0.0);
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (v - proj).norm()
    }
}

/// True iff the smallest principal angle between the two spans vanishes
/// numerically: the largest singular value of `A†B` is at least
/// `1 - cluster_width`.
pub fn subspace_intersects(a: &Subspace, b: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(largest_principal_cosine(a, b)? >= 1.0 - cfg.cluster_width.max(1e-12))
}

/// Cosine of the smallest principal angle between two subspaces (0 if
/// either is trivial).
pub fn largest_principal_cosine(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            actual: b.ambient_dim(),
        });
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(0.0);
    }
    let cross: DMatrix<Complex64> = a.basis.adjoint() * &b.basis;
    Ok(cross
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max))
}
