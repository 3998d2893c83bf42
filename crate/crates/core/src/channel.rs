//! CPTP maps stored through their normalized Choi state
//! `J(Φ) = (1/n) Σ_ij E_ij ⊗ Φ(E_ij)` on `C^n ⊗ C^k`, with index
//! `(i, a) ↦ i·k + a`.

use num_complex::Complex64;
use serde::Serialize;

use crate::divergence::{max_divergence, DivergenceValue};
use crate::error::{CptpProperty, Error, Result};
use crate::hermitian::{partial_trace_raw, partial_transpose_raw, CMatrix, CVector, HermitianMatrix, Subsystem};
use crate::orders::qpe_leq;
use crate::state::DensityMatrix;
use crate::tolerance::ToleranceConfig;
use crate::verdict::{OrderVerdict, Relation};

/// Allowed deviation of `Σ K†K` from the identity and of `tr₂ J` from `⊥_n`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Channel {
    in_dim: usize,
    out_dim: usize,
    choi: DensityMatrix,
    kraus: Vec<CMatrix>,
}

fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// `Σ_a K_a X K_a†`.
pub fn apply_kraus_ops(kraus: &[CMatrix], x: &CMatrix) -> CMatrix {
    let (rows, _) = kraus[0].shape();
    kraus
        .iter()
        .fold(CMatrix::zeros(rows, rows), |acc, k| acc + k * x * k.adjoint())
}

/// `(1/n) Σ_ij E_ij ⊗ images[i·n + j]` without any validation.
pub fn choi_from_images(n: usize, k: usize, images: &[CMatrix]) -> CMatrix {
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    let mut j = CMatrix::zeros(n * k, n * k);
    for i in 0..n {
        for jj in 0..n {
            let img = &images[i * n + jj];
            for a in 0..k {
                for b in 0..k {
                    j[(i * k + a, jj * k + b)] = img[(a, b)] * scale;
                }
            }
        }
    }
    j
}

/// Images `Φ(E_ij)` of all matrix units under a Kraus map, in row-major order.
pub fn matrix_unit_images(n: usize, kraus: &[CMatrix]) -> Vec<CMatrix> {
    (0..n * n)
        .map(|idx| apply_kraus_ops(kraus, &unit(n, idx / n, idx % n)))
        .collect()
}

fn not_cptp(property: CptpProperty, slack: f64) -> Error {
    Error::NotCptp { property, slack }
}

fn validate_choi(n: usize, k: usize, j: &HermitianMatrix, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
    if j.dim() != n * k {
        return Err(Error::DimensionMismatch {
            expected: n * k,
            actual: j.dim(),
        });
    }
    let psd = j.is_psd(cfg);
    if psd.fails() {
        return Err(not_cptp(CptpProperty::CompletelyPositive, psd.slack));
    }
    let reduced = HermitianMatrix::symmetrized(partial_trace_raw(j.as_matrix(), (n, k), Subsystem::Second));
    let dev = reduced.max_abs_diff(&HermitianMatrix::identity(n).scale(1.0 / n as f64));
    if dev > TRACE_PRESERVING_TOL {
        return Err(not_cptp(CptpProperty::TracePreserving, dev));
    }
    DensityMatrix::new(j.clone(), cfg)
}

impl Channel {
    /// Channel from a Choi matrix; Kraus operators come from its
    /// eigendecomposition, `K_a[r, i] = sqrt(n λ_a) v_a[i·k + r]`.
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let choi = validate_choi(in_dim, out_dim, &choi, cfg)?;
        let spec = choi.spectrum();
        let cut = cfg.rank_cutoff * spec.max();
        let kraus = (0..spec.dim())
            .filter(|&a| spec.values()[a] > cut)
            .map(|a| {
                let s = Complex64::new((in_dim as f64 * spec.values()[a]).sqrt(), 0.0);
                let v = spec.vector(a);
                CMatrix::from_fn(out_dim, in_dim, |r, i| v[i * out_dim + r] * s)
            })
            .collect();
        Ok(Channel {
            in_dim,
            out_dim,
            choi,
            kraus,
        })
    }

    /// Channel from Kraus operators `K_a : C^n → C^k`; the list is kept as
    /// given.
    pub fn from_kraus(in_dim: usize, out_dim: usize, kraus: Vec<CMatrix>, cfg: &ToleranceConfig) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BadParameter("empty Kraus list".into()));
        }
        for k in &kraus {
            if k.shape() != (out_dim, in_dim) {
                return Err(Error::DimensionMismatch {
                    expected: out_dim * in_dim,
                    actual: k.nrows() * k.ncols(),
                });
            }
        }
        let gram = kraus
            .iter()
            .fold(CMatrix::zeros(in_dim, in_dim), |acc, k| acc + k.adjoint() * k);
        let dev = (gram - CMatrix::identity(in_dim, in_dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > TRACE_PRESERVING_TOL {
            return Err(not_cptp(CptpProperty::TracePreserving, dev));
        }
        let images = matrix_unit_images(in_dim, &kraus);
        let j = HermitianMatrix::symmetrized(choi_from_images(in_dim, out_dim, &images));
        let choi = validate_choi(in_dim, out_dim, &j, cfg)?;
        Ok(Channel {
            in_dim,
            out_dim,
            choi,
            kraus,
        })
    }

    /// Channel from the images `Φ(E_ij)` of the matrix units, listed in
    /// row-major order of `(i, j)`.
    pub fn to_choi(in_dim: usize, out_dim: usize, images: &[CMatrix], cfg: &ToleranceConfig) -> Result<Self> {
        if images.len() != in_dim * in_dim {
            return Err(Error::DimensionMismatch {
                expected: in_dim * in_dim,
                actual: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|m| m.shape() != (out_dim, out_dim)) {
            return Err(Error::DimensionMismatch {
                expected: out_dim,
                actual: bad.nrows(),
            });
        }
        let raw = choi_from_images(in_dim, out_dim, images);
        let j = HermitianMatrix::new(raw).map_err(|e| match e {
            Error::NonHermitianInput(s) => not_cptp(CptpProperty::HermiticityPreserving, s),
            other => other,
        })?;
        Self::from_choi(in_dim, out_dim, j, cfg)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_kraus(n, n, vec![CMatrix::identity(n, n)], &ToleranceConfig::default())
            .expect("identity is CPTP")
    }

    /// `ρ ↦ U ρ U†` for an isometry `U : C^n → C^k`.
    pub fn isometry(u: CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let (k, n) = u.shape();
        Self::from_kraus(n, k, vec![u], cfg)
    }

    /// `D_t = (1 − t) id + t ⊥` on `M_n`, whose Choi state is
    /// `(1 − t) |M⟩⟨M| + t ⊥_{n²}`.
    pub fn depolarizing(n: usize, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadParameter(format!("depolarizing parameter {t} outside [0, 1]")));
        }
        let j = maximally_entangled(n)
            .matrix()
            .combine(1.0 - t, &HermitianMatrix::identity(n * n), t / (n * n) as f64);
        Self::from_choi(n, n, j, &ToleranceConfig::default())
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn choi(&self) -> &DensityMatrix {
        &self.choi
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Rank of the Gram matrix `tr(K_a† K_b)` of the stored Kraus list.
    pub fn kraus_rank(&self, cfg: &ToleranceConfig) -> usize {
        let m = self.kraus.len();
        let gram = CMatrix::from_fn(m, m, |a, b| (self.kraus[a].adjoint() * &self.kraus[b]).trace());
        let spec = HermitianMatrix::symmetrized(gram).eig();
        let cut = cfg.rank_cutoff * spec.max();
        spec.values().iter().filter(|&&l| l > cut).count()
    }

    fn check_input(&self, dim: usize) -> Result<()> {
        if dim != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                actual: dim,
            });
        }
        Ok(())
    }

    /// `Φ(X) = n tr₁(J^{T₁} (X ⊗ I_k))` for an arbitrary operator `X`.
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        self.check_input(x.nrows())?;
        let (n, k) = (self.in_dim, self.out_dim);
        let jt = partial_transpose_raw(self.choi.matrix().as_matrix(), (n, k), Subsystem::First);
        let lifted = x.kronecker(&CMatrix::identity(k, k));
        let out = partial_trace_raw(&(jt * lifted), (n, k), Subsystem::First);
        Ok(out * Complex64::new(n as f64, 0.0))
    }

    /// Action on a state through the Choi matrix.
    pub fn apply(&self, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix().as_matrix())?;
        DensityMatrix::new(HermitianMatrix::symmetrized(out), cfg)
    }

    /// Action on a state through the Kraus operators.
    pub fn apply_kraus(&self, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
        self.check_input(rho.dim())?;
        let out = apply_kraus_ops(&self.kraus, rho.matrix().as_matrix());
        DensityMatrix::new(HermitianMatrix::symmetrized(out), cfg)
    }

    /// `(I_m ⊗ Φ)(ρ)` for `ρ` on `C^m ⊗ C^n`.
    pub fn apply_extended(&self, rho: &DensityMatrix, m: usize, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
        if rho.dim() != m * self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: m * self.in_dim,
                actual: rho.dim(),
            });
        }
        let id = CMatrix::identity(m, m);
        let lifted: Vec<CMatrix> = self.kraus.iter().map(|k| id.kronecker(k)).collect();
        let out = apply_kraus_ops(&lifted, rho.matrix().as_matrix());
        DensityMatrix::new(HermitianMatrix::symmetrized(out), cfg)
    }

    /// `(1 − t)·self + t·other`.
    pub fn mix(&self, other: &Channel, t: f64, cfg: &ToleranceConfig) -> Result<Channel> {
        self.same_signature(other)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadParameter(format!("mixing weight {t} outside [0, 1]")));
        }
        let (a, b) = (Complex64::new((1.0 - t).sqrt(), 0.0), Complex64::new(t.sqrt(), 0.0));
        let kraus = self
            .kraus
            .iter()
            .map(|k| k * a)
            .chain(other.kraus.iter().map(|k| k * b))
            .collect();
        Channel::from_kraus(self.in_dim, self.out_dim, kraus, cfg)
    }

    /// `self ⊗ other : M_{n₁n₂} → M_{k₁k₂}`.
    pub fn tensor(&self, other: &Channel, cfg: &ToleranceConfig) -> Result<Channel> {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kronecker(b)))
            .collect();
        Channel::from_kraus(self.in_dim * other.in_dim, self.out_dim * other.out_dim, kraus, cfg)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Channel, cfg: &ToleranceConfig) -> Result<Channel> {
        if after.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch {
                expected: self.out_dim,
                actual: after.in_dim,
            });
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Channel::from_kraus(self.in_dim, after.out_dim, kraus, cfg)
    }

    fn same_signature(&self, other: &Channel) -> Result<()> {
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim * self.out_dim,
                actual: other.in_dim * other.out_dim,
            });
        }
        Ok(())
    }
}

/// Normalized maximally entangled state `|M⟩⟨M|` with `|M⟩ = n^{-1/2} Σ |ii⟩`.
pub fn maximally_entangled(n: usize) -> DensityMatrix {
    let w = Complex64::new(1.0 / n as f64, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let on_diag = |idx: usize| idx / n == idx % n;
    let m = CMatrix::from_fn(n * n, n * n, |r, c| if on_diag(r) && on_diag(c) { w } else { zero });
    let m = HermitianMatrix::new(m).expect("real symmetric");
    DensityMatrix::new(m, &ToleranceConfig::default()).expect("rank-one projector over n")
}

/// Images of the transpose map `X ↦ X^T`, which is positive but not
/// completely positive.
pub fn transpose_images(n: usize) -> Vec<CMatrix> {
    (0..n * n).map(|idx| unit(n, idx % n, idx / n)).collect()
}

/// Channel order `Φ ⊑ Ψ ⟺ J(Φ) ⊑ J(Ψ)`.
///
/// Also evaluates the equivalent complete-positivity form
/// `||J(Ψ)||·Φ − ||J(Φ)||·Ψ ≥_cp 0` with the Choi matrix of the difference
/// rebuilt from Kraus images, and reports a disagreement that neither
/// route flags as marginal.
pub fn channel_qpe_leq(phi: &Channel, psi: &Channel, cfg: &ToleranceConfig) -> Result<OrderVerdict> {
    phi.same_signature(psi)?;
    let choi_route = qpe_leq(&phi.choi, &psi.choi, cfg)?;

    let (n, k) = (phi.in_dim, phi.out_dim);
    let (np, ns) = (phi.choi.top_eigenvalue(), psi.choi.top_eigenvalue());
    let images: Vec<CMatrix> = matrix_unit_images(n, &phi.kraus)
        .into_iter()
        .zip(matrix_unit_images(n, &psi.kraus))
        .map(|(a, b)| a * Complex64::new(ns, 0.0) - b * Complex64::new(np, 0.0))
        .collect();
    let cp_route = HermitianMatrix::symmetrized(choi_from_images(n, k, &images)).is_psd(cfg);

    let decisive = |r: Relation| r != Relation::Marginal;
    if decisive(choi_route.relation) && decisive(cp_route.relation) && choi_route.relation != cp_route.relation {
        return Err(Error::RouteMismatch(format!(
            "Choi route {:?} (slack {:e}), CP route {:?} (slack {:e})",
            choi_route.relation, choi_route.slack, cp_route.relation, cp_route.slack
        )));
    }
    Ok(choi_route)
}

/// `D_∞(J(Ψ) ‖ J(Φ))`.
pub fn channel_max_divergence(psi: &Channel, phi: &Channel, cfg: &ToleranceConfig) -> Result<DivergenceValue> {
    psi.same_signature(phi)?;
    max_divergence(&psi.choi, &phi.choi, cfg)
}

/// `D_∞((I_m ⊗ Ψ)(ρ) ‖ (I_m ⊗ Φ)(ρ))` for a bipartite input on `C^m ⊗ C^n`.
pub fn extended_max_divergence(
    psi: &Channel,
    phi: &Channel,
    rho: &DensityMatrix,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<DivergenceValue> {
    psi.same_signature(phi)?;
    max_divergence(&psi.apply_extended(rho, m, cfg)?, &phi.apply_extended(rho, m, cfg)?, cfg)
}

/// Residuals of the Choi-state identities for a sample of channels.
#[derive(Debug, Clone, Serialize)]
pub struct JamiolkowskiReport {
    /// `(rank J(Φ₁), Kraus rank of Φ₁)`.
    pub rank: (usize, usize),
    /// `||J(Φ₁ ⊗ Φ₂) − P (J(Φ₁) ⊗ J(Φ₂)) P†||` entrywise maximum.
    pub tensor_residual: f64,
    /// `||J((1 − t)Φ₁ + tΦ₂) − (1 − t)J(Φ₁) − tJ(Φ₂)||`.
    pub convexity_residual: f64,
    /// `||J(Ξ₂ ∘ Φ₁ ∘ Ξ₁) − (Ξ₁^T ⊗ Ξ₂)(J(Φ₁))||`.
    pub composition_residual: f64,
}

impl JamiolkowskiReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.rank.0 == self.rank.1
            && self.tensor_residual < tol
            && self.convexity_residual < tol
            && self.composition_residual < tol
    }
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Reorders `C^{n₁} ⊗ C^{k₁} ⊗ C^{n₂} ⊗ C^{k₂}` into
/// `C^{n₁} ⊗ C^{n₂} ⊗ C^{k₁} ⊗ C^{k₂}`.
pub fn regroup_tensor_factors(m: &CMatrix, (n1, k1, n2, k2): (usize, usize, usize, usize)) -> CMatrix {
    let src = |i1: usize, a1: usize, i2: usize, a2: usize| ((i1 * k1 + a1) * n2 + i2) * k2 + a2;
    let dst = |i1: usize, a1: usize, i2: usize, a2: usize| ((i1 * n2 + i2) * k1 + a1) * k2 + a2;
    let d = n1 * k1 * n2 * k2;
    let mut perm = vec![0usize; d];
    for i1 in 0..n1 {
        for a1 in 0..k1 {
            for i2 in 0..n2 {
                for a2 in 0..k2 {
                    perm[dst(i1, a1, i2, a2)] = src(i1, a1, i2, a2);
                }
            }
        }
    }
    CMatrix::from_fn(d, d, |r, c| m[(perm[r], perm[c])])
}

/// Checks rank, tensor, convexity and composition identities of the Choi
/// map on the given channels. `Φ₂` must share the signature of `Φ₁`,
/// `Ξ₁` must map `M_n → M_n` for `Φ₁ : M_n → M_k`, and `Ξ₂` must accept
/// `M_k`. The transpose map `Ξ₁^T` has Kraus
/// operators `A^T`, i.e. `Ξ₁^T(Y) = Ξ₁*(Y^T)^T`.
pub fn jamiolkowski_properties_check(
    phi1: &Channel,
    phi2: &Channel,
    xi1: &Channel,
    xi2: &Channel,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<JamiolkowskiReport> {
    if xi1.in_dim != phi1.in_dim || xi1.out_dim != phi1.in_dim {
        return Err(Error::DimensionMismatch {
            expected: phi1.in_dim,
            actual: xi1.out_dim,
        });
    }
    if xi2.in_dim != phi1.out_dim {
        return Err(Error::DimensionMismatch {
            expected: phi1.out_dim,
            actual: xi2.in_dim,
        });
    }
    phi1.same_signature(phi2)?;
    let (n, k) = (phi1.in_dim, phi1.out_dim);

    let rank = (phi1.choi.rank(cfg), phi1.kraus_rank(cfg));

    let product = phi1.tensor(phi2, cfg)?;
    let separate = phi1.choi.matrix().as_matrix().kronecker(phi2.choi.matrix().as_matrix());
    let regrouped = regroup_tensor_factors(&separate, (n, k, phi2.in_dim, phi2.out_dim));
    let tensor_residual = max_entry(&(product.choi.matrix().as_matrix() - regrouped));

    let mixed_images: Vec<CMatrix> = (0..n * n)
        .map(|idx| {
            let e = unit(n, idx / n, idx % n);
            apply_kraus_ops(&phi1.kraus, &e) * Complex64::new(1.0 - t, 0.0)
                + apply_kraus_ops(&phi2.kraus, &e) * Complex64::new(t, 0.0)
        })
        .collect();
    let mixed = choi_from_images(n, k, &mixed_images);
    let affine = phi1.choi.matrix().combine(1.0 - t, phi2.choi.matrix(), t);
    let convexity_residual = max_entry(&(mixed - affine.as_matrix()));

    let composed_images: Vec<CMatrix> = (0..n * n)
        .map(|idx| {
            let e = unit(n, idx / n, idx % n);
            let x = apply_kraus_ops(&xi1.kraus, &e);
            let y = apply_kraus_ops(&phi1.kraus, &x);
            apply_kraus_ops(&xi2.kraus, &y)
        })
        .collect();
    let composed = choi_from_images(n, xi2.out_dim, &composed_images);
    let sandwich: Vec<CMatrix> = xi1
        .kraus
        .iter()
        .flat_map(|a| xi2.kraus.iter().map(move |b| a.transpose().kronecker(b)))
        .collect();
    let pushed = apply_kraus_ops(&sandwich, phi1.choi.matrix().as_matrix());
    let composition_residual = max_entry(&(composed - pushed));

    Ok(JamiolkowskiReport {
        rank,
        tensor_residual,
        convexity_residual,
        composition_residual,
    })
}

/// Best fidelity `F²(|M⟩⟨M|, (I ⊗ Φ)(ρ))` for distributing a maximally
/// entangled state through `Φ : M_n → M_n`.
#[derive(Debug, Clone)]
pub struct EntanglementFidelity {
    /// `||J(Φ)||`.
    pub value: f64,
    /// Top eigenvector `v` of `J(Φ)`.
    pub top_eigenvector: CVector,
    /// Input `ψ` on `C^k ⊗ C^n` with coefficient matrix `V†`, where
    /// `V[i][r] = v[i·k + r]`. It reaches `F² = (n/k)·value` against the
    /// standard `|M⟩`.
    pub optimal_input: DensityMatrix,
}

pub fn entanglement_fidelity(phi: &Channel, cfg: &ToleranceConfig) -> Result<EntanglementFidelity> {
    let (n, k) = (phi.in_dim, phi.out_dim);
    let spec = phi.choi.spectrum();
    let value = spec.max();
    let v = spec.vector(0);
    let psi = CVector::from_fn(k * n, |idx, _| v[(idx % n) * k + idx / n].conj());
    let _ = cfg;
    Ok(EntanglementFidelity {
        value,
        top_eigenvector: v,
        optimal_input: DensityMatrix::pure(&psi)?,
    })
}

/// `⟨M|(I_k ⊗ Φ)(ρ)|M⟩` for `ρ` on `C^k ⊗ C^n` and the standard maximally
/// entangled `|M⟩` on `C^k ⊗ C^k`, optionally rotated by `I ⊗ W`.
pub fn entangled_overlap(
    phi: &Channel,
    rho: &DensityMatrix,
    rotation: Option<&CMatrix>,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let k = phi.out_dim;
    let out = phi.apply_extended(rho, k, cfg)?;
    let m = maximally_entangled(k);
    let target = match rotation {
        Some(w) => m.conjugate(&CMatrix::identity(k, k).kronecker(w)),
        None => m,
    };
    Ok(out.matrix().hs_inner(target.matrix()))
}

/// The norm-based channel order `||Ψ(I)||·Φ − ||Φ(I)||·Ψ ≥_cp 0`, which
/// collapses to equality on unital channels.
pub fn norm_order_leq(phi: &Channel, psi: &Channel, cfg: &ToleranceConfig) -> Result<(f64, f64, OrderVerdict)> {
    phi.same_signature(psi)?;
    let id = CMatrix::identity(phi.in_dim, phi.in_dim);
    let norm = |c: &Channel| HermitianMatrix::symmetrized(apply_kraus_ops(&c.kraus, &id)).operator_norm();
    let (np, ns) = (norm(phi), norm(psi));
    let diff = phi.choi.matrix().combine(ns, psi.choi.matrix(), -np);
    Ok((np, ns, diff.is_psd(cfg)))
}

/// Pointwise comparison `Φ(ρ) ⊑ Ψ(ρ)` on a single input.
pub fn pointwise_leq(phi: &Channel, psi: &Channel, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<OrderVerdict> {
    phi.same_signature(psi)?;
    qpe_leq(&phi.apply(rho, cfg)?, &psi.apply(rho, cfg)?, cfg)
}

/// Outcome of feeding `a|00⟩ + b|11⟩` into `D₁ ⊗ id₂` and `id₂ ⊗ id₂`.
#[derive(Debug, Clone)]
pub struct PointwiseTensorDemo {
    pub input: DensityMatrix,
    pub lower_output: DensityMatrix,
    pub upper_output: DensityMatrix,
    pub verdict: OrderVerdict,
}

/// Shows the pointwise order is not preserved by tensor products: although
/// `D₁ ⊑ id₂` pointwise, `(D₁ ⊗ id₂)(ψ) ⋢ ψ` for an entangled `ψ` whose
/// reduced state has distinct eigenvalues.
pub fn pointwise_tensor_demo(weight: f64, cfg: &ToleranceConfig) -> Result<PointwiseTensorDemo> {
    if !(weight > 0.0 && weight < 1.0 && weight != 0.5) {
        return Err(Error::BadParameter(format!(
            "weight {weight} must lie in (0, 1) and differ from 1/2"
        )));
    }
    let mut v = CVector::zeros(4);
    v[0] = Complex64::new(weight.sqrt(), 0.0);
    v[3] = Complex64::new((1.0 - weight).sqrt(), 0.0);
    let input = DensityMatrix::pure(&v)?;
    let lower = Channel::depolarizing(2, 1.0)?.tensor(&Channel::identity(2), cfg)?;
    let upper = Channel::identity(2).tensor(&Channel::identity(2), cfg)?;
    let lower_output = lower.apply(&input, cfg)?;
    let upper_output = upper.apply(&input, cfg)?;
    let verdict = qpe_leq(&lower_output, &upper_output, cfg)?;
    Ok(PointwiseTensorDemo {
        input,
        lower_output,
        upper_output,
        verdict,
    })
}
