//! Dense complex Hermitian matrices and the tolerance-aware spectral
//! operations everything else is built on.

use std::ops::{Add, Mul, Sub};

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;
use crate::verdict::OrderVerdict;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default absolute asymmetry accepted when constructing a Hermitian matrix,
/// relative to `max(1, max |a_ij|)`.
pub const HERMITIAN_ATOL: f64 = 1e-9;

/// Tensor factor selector for bipartite operations on `C^m ⊗ C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

/// Eigendecomposition with eigenvalues sorted in descending order and the
/// matching orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let fj = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        HermitianMatrix::symmetrized(&scaled * self.vectors.adjoint())
    }

    /// Projector onto the span of the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(usize, f64) -> bool) -> HermitianMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (j, &lambda) in self.values.iter().enumerate() {
            if keep(j, lambda) {
                let v = self.vectors.column(j);
                out += &v * v.adjoint();
            }
        }
        HermitianMatrix::symmetrized(out)
    }

    /// Spectral power with the generalized-inverse convention: for `p < 0`
    /// eigenvalues at or below `cutoff` map to zero, for `p == 0` the result
    /// is the support projector, and for `p > 0` negative rounding noise is
    /// clamped to zero.
    pub fn power(&self, p: f64, cutoff: f64) -> HermitianMatrix {
        self.map(|l| if l > cutoff { l.powf(p) } else { 0.0 })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }
}

impl HermitianMatrix {
    /// Validates symmetry within [`HERMITIAN_ATOL`] and stores the exactly
    /// symmetrized matrix `(A + A†)/2`.
    pub fn new(data: CMatrix) -> Result<Self> {
        Self::with_tolerance(data, HERMITIAN_ATOL)
    }

    pub fn with_tolerance(data: CMatrix, atol: f64) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let n = data.nrows();
        let mut asym = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((data[(i, j)] - data[(j, i)].conj()).norm());
                scale = scale.max(data[(i, j)].norm());
            }
        }
        if !asym.is_finite() || asym > atol * scale {
            return Err(Error::NonHermitianInput(asym));
        }
        Ok(Self::symmetrized(data))
    }

    pub(crate) fn symmetrized(data: CMatrix) -> Self {
        let adj = data.adjoint();
        Self {
            data: (data + adj) * Complex64::new(0.5, 0.0),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&d| Complex64::new(d, 0.0)));
        Self {
            data: CMatrix::from_diagonal(&v),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: CMatrix::zeros(n, n),
        }
    }

    /// Rank-one operator `|v⟩⟨v|` (not normalized).
    pub fn outer(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    /// Standard matrix unit `E_ij` is not Hermitian for `i != j`; this
    /// returns the Hermitian matrix with real entries `a` at `(i,j)` and
    /// `(j,i)`.
    pub fn symmetric_unit(n: usize, i: usize, j: usize, a: f64) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(a, 0.0);
        m[(j, i)] = Complex64::new(a, 0.0);
        Self { data: m }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.diagonal().iter().map(|z| z.re).sum()
    }

    /// Real diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        self.data.diagonal().iter().map(|z| z.re).collect()
    }

    /// Largest off-diagonal entry magnitude; zero for diagonal matrices.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.data[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn eig(&self) -> Spectrum {
        let n = self.dim();
        if n == 0 {
            return Spectrum {
                values: Vec::new(),
                vectors: CMatrix::zeros(0, 0),
            };
        }
        let eig = SymmetricEigen::new(self.data.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Spectrum { values, vectors }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(c, 0.0),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.dim(), other.dim(), "combine: dimension mismatch");
        Self {
            data: &self.data * Complex64::new(a, 0.0) + &other.data * Complex64::new(b, 0.0),
        }
    }

    /// `X A X†` for an arbitrary (possibly rectangular) `X`.
    pub fn conjugate_by(&self, x: &CMatrix) -> Self {
        Self::symmetrized(x * &self.data * x.adjoint())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
        }
    }

    pub fn partial_trace(&self, dims: (usize, usize), traced: Subsystem) -> Result<Self> {
        check_bipartite(self.dim(), dims)?;
        Ok(Self::symmetrized(partial_trace_raw(&self.data, dims, traced)))
    }

    pub fn partial_transpose(&self, dims: (usize, usize), transposed: Subsystem) -> Result<Self> {
        check_bipartite(self.dim(), dims)?;
        Ok(Self {
            data: partial_transpose_raw(&self.data, dims, transposed),
        })
    }

    pub fn operator_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.eig().spectral_radius()
    }

    /// Schatten `p`-norm for `p ∈ [1, ∞]`.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::BadParameter(format!("Schatten index {p} is below 1")));
        }
        let spec = self.eig();
        if p.is_infinite() {
            return Ok(spec.spectral_radius());
        }
        let sum: f64 = spec.values().iter().map(|l| l.abs().powf(p)).sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Positivity test with the tri-state slack rule from
    /// [`OrderVerdict::from_slack`].
    pub fn is_psd(&self, cfg: &ToleranceConfig) -> OrderVerdict {
        psd_verdict(&self.eig(), cfg)
    }

    /// Spectral power `A^p` of a positive semidefinite matrix. Negative
    /// powers are generalized inverses that vanish on the numerical kernel
    /// (eigenvalues at or below `rank_cutoff·λ_max`).
    pub fn power(&self, p: f64, cfg: &ToleranceConfig) -> Result<Self> {
        let spec = self.eig();
        let verdict = psd_verdict(&spec, cfg);
        if verdict.fails() {
            return Err(Error::NegativeEigenvalue(verdict.slack));
        }
        let cutoff = cfg.rank_cutoff * spec.max().max(0.0);
        Ok(spec.power(p, cutoff))
    }

    /// Operator-norm distance `||self - other||`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).operator_norm()
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.data * v)[(0, 0)].re
    }

    /// Hilbert–Schmidt inner product `tr(A B)` (real for Hermitian inputs).
    pub fn hs_inner(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.data - &other.data)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn psd_verdict(spec: &Spectrum, cfg: &ToleranceConfig) -> OrderVerdict {
    if spec.dim() == 0 {
        return OrderVerdict::structural(true, None);
    }
    let lowest = spec.dim() - 1;
    OrderVerdict::from_slack(spec.min(), spec.spectral_radius(), cfg, spec.vector(lowest))
}

fn check_bipartite(n: usize, dims: (usize, usize)) -> Result<()> {
    if dims.0 * dims.1 != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: dims.0 * dims.1,
        });
    }
    Ok(())
}

/// Partial trace of an arbitrary square matrix on `C^m ⊗ C^n`, where basis
/// index `(i, a)` is stored at `i·n + a`.
pub(crate) fn partial_trace_raw(a: &CMatrix, (m, n): (usize, usize), traced: Subsystem) -> CMatrix {
    match traced {
        Subsystem::Second => CMatrix::from_fn(m, m, |i, j| {
            (0..n).map(|k| a[(i * n + k, j * n + k)]).sum()
        }),
        Subsystem::First => CMatrix::from_fn(n, n, |x, y| {
            (0..m).map(|k| a[(k * n + x, k * n + y)]).sum()
        }),
    }
}

pub(crate) fn partial_transpose_raw(a: &CMatrix, (m, n): (usize, usize), transposed: Subsystem) -> CMatrix {
    CMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, x) = (r / n, r % n);
        let (j, y) = (c / n, c % n);
        match transposed {
            Subsystem::First => a[(j * n + x, i * n + y)],
            Subsystem::Second => a[(i * n + y, j * n + x)],
        }
    })
}

/// Uhlmann fidelity `F(ρ, σ) = tr sqrt(sqrt(ρ) σ sqrt(ρ))`, clamped to
/// `[0, 1]` for normalized inputs.
pub fn fidelity(rho: &HermitianMatrix, sigma: &HermitianMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let root = rho.power(0.5, cfg)?;
    let inner = sigma.conjugate_by(root.as_matrix());
    let spec = inner.eig();
    let cut = cfg.rank_cutoff * spec.max().max(0.0);
    let f: f64 = spec.values().iter().filter(|&&l| l > cut).map(|l| l.sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}
