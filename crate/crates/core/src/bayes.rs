//! Classical and quantum Bayesian updates on positive evidence.
//!
//! Two quantum rules are provided: the symmetric "FLS" rule
//! `ρ ↦ ρ^{1/2} E ρ^{1/2} / tr(ρE)`, which realises the positive-evidence
//! order exactly, and the sequential-product rule
//! `ρ ↦ E^{1/2} ρ E^{1/2} / tr(Eρ)`, whose reachability relation is not
//! transitive.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, HermitianMatrix};
use crate::orders::{classical_pe_leq, qpe_leq};
use crate::random::{random_effect, random_probability_vector, random_sharp_effect, random_spread_state};
use crate::state::{largest_principal_cosine, subspace_intersects, DensityMatrix, Effect, ProbabilityVector};
use crate::tolerance::ToleranceConfig;
use crate::verdict::OrderVerdict;

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            actual: b,
        });
    }
    Ok(())
}

/// Bayes' rule `y_i = p_i x_i / Σ_j p_j x_j` for likelihoods `p ∈ [0,1]^n`.
pub fn classical_update(x: &ProbabilityVector, likelihood: &[f64]) -> Result<ProbabilityVector> {
    same_dim(x.len(), likelihood.len())?;
    if let Some(p) = likelihood.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::BadParameter(format!("likelihood {p} outside [0, 1]")));
    }
    let c: f64 = x.as_slice().iter().zip(likelihood).map(|(xi, pi)| xi * pi).sum();
    if !(c > 0.0) {
        return Err(Error::ZeroEvidence);
    }
    ProbabilityVector::new(
        x.as_slice()
            .iter()
            .zip(likelihood)
            .map(|(xi, pi)| xi * pi / c)
            .collect(),
    )
}

/// Recovers the likelihood vector carrying `x` to `y`.
///
/// `p_i = (y_i / y⁺) / (x_i / x⁺)` on the support of `x` and zero off it,
/// so the maximum `p = 1` sits on the common argmax.
pub fn classical_solve_evidence(
    x: &ProbabilityVector,
    y: &ProbabilityVector,
    cfg: &ToleranceConfig,
) -> Result<Vec<f64>> {
    same_dim(x.len(), y.len())?;
    if x.as_slice().iter().zip(y.as_slice()).any(|(&xi, &yi)| xi <= 0.0 && yi > 0.0) {
        return Err(Error::SupportViolation);
    }
    if classical_pe_leq(x, y, cfg)?.fails() {
        return Err(Error::NotBelow);
    }
    let (xp, yp) = (x.max(), y.max());
    Ok(x.as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(&xi, &yi)| if xi > 0.0 { (yi * xp / (xi * yp)).min(1.0) } else { 0.0 })
        .collect())
}

fn outcome_probability(rho: &DensityMatrix, e: &Effect, cfg: &ToleranceConfig) -> Result<f64> {
    same_dim(rho.dim(), e.dim())?;
    let prob = rho.matrix().hs_inner(e.matrix());
    if !(prob > cfg.rank_cutoff) {
        return Err(Error::ZeroProbability(prob));
    }
    Ok(prob)
}

/// `ρ^{1/2} E ρ^{1/2} / tr(ρE)`.
pub fn fls_update(rho: &DensityMatrix, e: &Effect, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
    let prob = outcome_probability(rho, e, cfg)?;
    let root = rho.power(0.5, cfg);
    DensityMatrix::normalized(e.matrix().conjugate_by(root.as_matrix()).scale(1.0 / prob), cfg)
}

/// `E^{1/2} ρ E^{1/2} / tr(Eρ)`.
pub fn sequential_update(rho: &DensityMatrix, e: &Effect, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
    let prob = outcome_probability(rho, e, cfg)?;
    let root = e.sqrt();
    DensityMatrix::normalized(rho.matrix().conjugate_by(root.as_matrix()).scale(1.0 / prob), cfg)
}

/// Positive-evidence condition `L⁺(E) ∩ L⁺(ρ) ≠ {0}`.
pub fn is_agreeing(rho: &DensityMatrix, e: &Effect, cfg: &ToleranceConfig) -> Result<bool> {
    subspace_intersects(&e.top_eigenspace(cfg).space, &rho.top_eigenspace(cfg).space, cfg)
}

/// Effect `E = (ρ/ρ⁺)^{-1/2} (σ/σ⁺) (ρ/ρ⁺)^{-1/2}` with `fls_update(ρ, E) = σ`.
///
/// The inverse square root is the generalized inverse, so `E` vanishes off
/// the support of `ρ`. `E` is rescaled to unit norm, which it has in exact
/// arithmetic whenever `ρ ⊑ σ`.
pub fn reconstruct_effect(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &ToleranceConfig) -> Result<Effect> {
    if qpe_leq(rho, sigma, cfg)?.fails() {
        return Err(Error::NotBelow);
    }
    let inv_root = rho.power(-0.5, cfg);
    let raw = sigma.matrix().conjugate_by(inv_root.as_matrix());
    let norm = raw.operator_norm();
    if !(norm > 0.0) {
        return Err(Error::NotBelow);
    }
    Effect::new(raw.scale(1.0 / norm), cfg)
}

/// Verdict of `E^{1/2}ρE^{1/2}/tr(Eρ) ⊑ E^{1/2}σE^{1/2}/tr(Eσ)`, defined
/// when `ρ ⊑ σ` and `E` agrees with `σ`.
pub fn measurement_monotone_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    e: &Effect,
    cfg: &ToleranceConfig,
) -> Result<OrderVerdict> {
    if qpe_leq(rho, sigma, cfg)?.fails() {
        return Err(Error::PreconditionViolated("prior pair is not ordered".into()));
    }
    if !is_agreeing(sigma, e, cfg)? {
        return Err(Error::PreconditionViolated(
            "effect does not agree with the upper state".into(),
        ));
    }
    qpe_leq(&sequential_update(rho, e, cfg)?, &sequential_update(sigma, e, cfg)?, cfg)
}

/// Effect `vv† + Q B Q` where `v` spans the top of `L⁺(ρ)` and
/// `Q = I - vv†`: always agrees with `ρ`.
pub fn agreeing_effect_from(rho: &DensityMatrix, b: &Effect, cfg: &ToleranceConfig) -> Effect {
    let n = rho.dim();
    let v = rho.top_eigenspace(cfg).space.vector(0);
    let top = HermitianMatrix::outer(&v);
    let q = (&HermitianMatrix::identity(n) - &top).into_matrix();
    let e = &top + &b.matrix().conjugate_by(&q);
    Effect::new(e, cfg).expect("block-diagonal with blocks in [0, 1]")
}

/// [`agreeing_effect_from`] with a random effect `B`.
pub fn random_agreeing_effect<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R, cfg: &ToleranceConfig) -> Effect {
    agreeing_effect_from(rho, &random_effect(rho.dim(), rng), cfg)
}

/// Two sequential-product updates and the single update that would have to
/// replace them.
#[derive(Debug, Clone)]
pub struct CompositionReport {
    pub prior: DensityMatrix,
    pub first: Effect,
    pub second: Effect,
    pub intermediate: DensityMatrix,
    pub posterior: DensityMatrix,
    /// The unique (up to scale) effect `G` with
    /// `G^{1/2} ρ G^{1/2} ∝ posterior`, scaled to `||G|| = 1`.
    pub composed: Effect,
    /// Cosine of the smallest angle between `L⁺(G)` and `L⁺(ρ)`.
    pub overlap: f64,
    /// Whether `G` is agreeing evidence for the prior.
    pub composable: bool,
    /// `||seq(ρ, G) − posterior||`.
    pub residual: f64,
}

/// Applies two agreeing sequential-product updates and decides whether a
/// single agreeing effect reaches the same posterior.
///
/// For full-rank `ρ` the equation `X ρ X = τ` has the unique positive
/// solution `X = ρ^{-1/2} (ρ^{1/2} τ ρ^{1/2})^{1/2} ρ^{-1/2}`, so the
/// candidate `G = X²` is forced up to scale and the check is exact.
pub fn sequential_composition(
    rho: &DensityMatrix,
    first: &Effect,
    second: &Effect,
    cfg: &ToleranceConfig,
) -> Result<CompositionReport> {
    if !rho.is_full_rank(cfg) {
        return Err(Error::PreconditionViolated("prior must be full rank".into()));
    }
    if !is_agreeing(rho, first, cfg)? {
        return Err(Error::PreconditionViolated("first effect does not agree with the prior".into()));
    }
    let intermediate = sequential_update(rho, first, cfg)?;
    if !is_agreeing(&intermediate, second, cfg)? {
        return Err(Error::PreconditionViolated(
            "second effect does not agree with the intermediate state".into(),
        ));
    }
    let posterior = sequential_update(&intermediate, second, cfg)?;

    let root = rho.power(0.5, cfg);
    let inv_root = rho.power(-0.5, cfg);
    let middle = posterior
        .matrix()
        .conjugate_by(root.as_matrix())
        .power(0.5, cfg)?;
    let x = middle.conjugate_by(inv_root.as_matrix());
    let x_sq: CMatrix = x.as_matrix() * x.as_matrix();
    let g = HermitianMatrix::new(x_sq)?;
    let g = g.scale(1.0 / g.operator_norm());
    let composed = Effect::new(g, cfg)?;
    let overlap = largest_principal_cosine(&composed.top_eigenspace(cfg).space, &rho.top_eigenspace(cfg).space)?;
    let composable = subspace_intersects(&composed.top_eigenspace(cfg).space, &rho.top_eigenspace(cfg).space, cfg)?;
    let residual = sequential_update(rho, &composed, cfg)?.distance(&posterior);
    Ok(CompositionReport {
        prior: rho.clone(),
        first: first.clone(),
        second: second.clone(),
        intermediate,
        posterior,
        composed,
        overlap,
        composable,
        residual,
    })
}

/// Family of instances drawn by [`sequential_transitivity_demo`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateFamily {
    /// Ill-conditioned priors with nearly sharp agreeing effects. Every
    /// agreeing effect fixes the prior's top eigenvector, so a failure needs
    /// the complementary blocks to act like a rotation on a badly
    /// conditioned state.
    Generic,
    /// Diagonal priors and diagonal effects only.
    Commuting,
}

/// Minimum angle gap (as `1 - cos`) for a search hit to count.
pub const TRANSITIVITY_MARGIN: f64 = 1e-6;

/// Seeded search for a pair of agreeing sequential updates that no single
/// agreeing sequential update reproduces.
pub fn sequential_transitivity_demo<R: Rng + ?Sized>(
    dim: usize,
    budget: usize,
    family: UpdateFamily,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<CompositionReport> {
    if dim < 2 {
        return Err(Error::BadParameter("dimension must be at least 2".into()));
    }
    for _ in 0..budget {
        let (rho, first, second) = match family {
            UpdateFamily::Generic => {
                let rho = random_spread_state(dim, 3.0, rng);
                let first = agreeing_effect_from(&rho, &random_sharp_effect(dim, rng), cfg);
                let mid = sequential_update(&rho, &first, cfg)?;
                let second = agreeing_effect_from(&mid, &random_sharp_effect(dim, rng), cfg);
                (rho, first, second)
            }
            UpdateFamily::Commuting => {
                let p = random_probability_vector(dim, rng);
                let rho = p.to_state(cfg)?;
                let first = diagonal_agreeing_effect(p.as_slice(), rng, cfg)?;
                let mid = sequential_update(&rho, &first, cfg)?;
                let q = mid.as_diagonal(1e-12).ok_or_else(|| {
                    Error::PreconditionViolated("commuting update left the diagonal".into())
                })?;
                let second = diagonal_agreeing_effect(q.as_slice(), rng, cfg)?;
                (rho, first, second)
            }
        };
        let report = sequential_composition(&rho, &first, &second, cfg)?;
        if !report.composable && report.overlap < 1.0 - TRANSITIVITY_MARGIN {
            return Ok(report);
        }
    }
    Err(Error::SearchBudgetExhausted(budget))
}

fn diagonal_agreeing_effect<R: Rng + ?Sized>(p: &[f64], rng: &mut R, cfg: &ToleranceConfig) -> Result<Effect> {
    let top = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top_idx = p.iter().position(|&v| v == top).unwrap_or(0);
    let diag: Vec<f64> = (0..p.len())
        .map(|i| if i == top_idx { 1.0 } else { rng.random::<f64>() })
        .collect();
    Effect::new(HermitianMatrix::from_real_diagonal(&diag), cfg)
}
