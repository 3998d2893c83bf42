//! Depolarizing maps, way-below witnesses and directed suprema.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orders::qpe_leq;
use crate::state::DensityMatrix;
use crate::tolerance::ToleranceConfig;
use crate::verdict::OrderVerdict;

/// Residual allowed when verifying a recovered mixing parameter.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Step size below which a chain counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;

/// `D_t(ρ) = (1 − t)ρ + t ⊥_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingMap {
    t: f64,
    dim: usize,
}

impl DepolarizingMap {
    pub fn new(t: f64, dim: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadParameter(format!("depolarizing parameter {t} outside [0, 1]")));
        }
        if dim == 0 {
            return Err(Error::BadParameter("dimension must be positive".into()));
        }
        Ok(DepolarizingMap { t, dim })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rho.dim(),
            });
        }
        rho.mix(&DensityMatrix::maximally_mixed(self.dim), self.t)
    }
}

pub fn depolarize(rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    DepolarizingMap::new(t, rho.dim())?.apply(rho)
}

/// Which sufficient condition certified `ρ ≪ σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WayBelowRule {
    /// `ρ` is the completely mixed state.
    Bottom,
    /// `ρ = (1 − t)σ + t ⊥_n` with `t ∈ (0, 1]`. Equivalently
    /// `σ = λρ + (1 − λ)⊥_n` with `λ = 1/(1 − t) > 1`, absent when `t = 1`.
    Depolarized { t: f64, lambda: Option<f64> },
    /// `ρ = (1 − t)σ + t κ` for a supplied `κ ≪ σ`.
    Interpolated { t: f64, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotBelowReason {
    OrderFails,
    KernelObstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WayBelowVerdict {
    CertifiedBelow { witness: WayBelowRule },
    NotBelow { reason: NotBelowReason },
    Unknown,
}

impl WayBelowVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, WayBelowVerdict::CertifiedBelow { .. })
    }

    pub fn is_not_below(&self) -> bool {
        matches!(self, WayBelowVerdict::NotBelow { .. })
    }
}

/// Solves `target ≈ (1 − t) from + t to` for `t` by projection and checks
/// the residual.
fn recover_mixing(target: &DensityMatrix, from: &DensityMatrix, to: &DensityMatrix) -> Option<f64> {
    let dir = to.matrix() - from.matrix();
    let denom = dir.hs_inner(&dir);
    if denom <= 0.0 {
        return None;
    }
    let t = (target.matrix() - from.matrix()).hs_inner(&dir) / denom;
    let rebuilt = from.matrix().combine(1.0 - t, to.matrix(), t);
    (rebuilt.max_abs_diff(target.matrix()) < RECONSTRUCTION_TOL).then_some(t)
}

fn is_bottom(rho: &DensityMatrix) -> bool {
    rho.distance(&DensityMatrix::maximally_mixed(rho.dim())) < RECONSTRUCTION_TOL
}

fn in_unit_interval(t: f64) -> bool {
    t > RECONSTRUCTION_TOL && t <= 1.0 + RECONSTRUCTION_TOL
}

/// Rules that need no caller-supplied context.
fn direct_rule(rho: &DensityMatrix, sigma: &DensityMatrix) -> Option<WayBelowRule> {
    let n = rho.dim();
    if is_bottom(rho) {
        return Some(WayBelowRule::Bottom);
    }
    let bottom = DensityMatrix::maximally_mixed(n);
    let t = recover_mixing(rho, sigma, &bottom).filter(|&t| in_unit_interval(t))?;
    let t = t.min(1.0);
    let lambda = (t < 1.0 - RECONSTRUCTION_TOL).then(|| 1.0 / (1.0 - t));
    Some(WayBelowRule::Depolarized { t, lambda })
}

/// Semi-decision for `ρ ≪ σ` in the QPE order.
///
/// `certified` is a list of states already known to be way below `σ`; each
/// is re-checked against the direct rules before use.
pub fn way_below_witness(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    certified: &[DensityMatrix],
    cfg: &ToleranceConfig,
) -> Result<WayBelowVerdict> {
    if qpe_leq(rho, sigma, cfg)?.fails() {
        return Ok(WayBelowVerdict::NotBelow {
            reason: NotBelowReason::OrderFails,
        });
    }
    if !rho.is_full_rank(cfg) {
        return Ok(WayBelowVerdict::NotBelow {
            reason: NotBelowReason::KernelObstruction,
        });
    }
    if let Some(witness) = direct_rule(rho, sigma) {
        return Ok(WayBelowVerdict::CertifiedBelow { witness });
    }
    for (index, kappa) in certified.iter().enumerate() {
        if kappa.dim() != rho.dim() || direct_rule(kappa, sigma).is_none() {
            continue;
        }
        if let Some(t) = recover_mixing(rho, sigma, kappa) {
            if in_unit_interval(t) {
                return Ok(WayBelowVerdict::CertifiedBelow {
                    witness: WayBelowRule::Interpolated { t: t.min(1.0), index },
                });
            }
        }
    }
    Ok(WayBelowVerdict::Unknown)
}

/// Increasing chain of full-rank states converging to a state above `σ`,
/// none of which lies above the rank-deficient `ρ`.
#[derive(Debug, Clone)]
pub struct KernelObstruction {
    /// `a_j = D_{1/(j+1)}(P / dim P)` with `P` the projector onto `L⁺(σ)`.
    pub chain: Vec<DensityMatrix>,
    pub limit: DensityMatrix,
    /// Verdicts of `ρ ⊑ a_j`.
    pub verdicts: Vec<OrderVerdict>,
    /// Verdict of `σ ⊑ limit`.
    pub limit_above_target: OrderVerdict,
}

impl KernelObstruction {
    /// Whether every chain element is full rank and not above `ρ`, and the
    /// chain is increasing with a limit above `σ`.
    pub fn holds(&self, cfg: &ToleranceConfig) -> Result<bool> {
        let full_rank = self.chain.iter().all(|a| a.is_full_rank(cfg));
        let increasing = self
            .chain
            .windows(2)
            .map(|w| qpe_leq(&w[0], &w[1], cfg))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|v| !v.fails());
        Ok(full_rank && increasing && self.verdicts.iter().all(|v| v.fails()) && !self.limit_above_target.fails())
    }
}

pub fn kernel_obstruction(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    len: usize,
    cfg: &ToleranceConfig,
) -> Result<KernelObstruction> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    if rho.is_full_rank(cfg) {
        return Err(Error::PreconditionViolated("state has trivial kernel".into()));
    }
    let top = sigma.top_eigenspace(cfg).space;
    let limit = DensityMatrix::normalized(top.projector(), cfg)?;
    let chain = (1..=len)
        .map(|j| depolarize(&limit, 1.0 / (j as f64 + 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let verdicts = chain.iter().map(|a| qpe_leq(rho, a, cfg)).collect::<Result<Vec<_>>>()?;
    let limit_above_target = qpe_leq(sigma, &limit, cfg)?;
    Ok(KernelObstruction {
        chain,
        limit,
        verdicts,
        limit_above_target,
    })
}

/// Limit of an increasing chain, taken as the last element once the final
/// step is below [`CONVERGENCE_TOL`].
pub fn directed_supremum(chain: &[DensityMatrix], cfg: &ToleranceConfig) -> Result<DensityMatrix> {
    let last = chain
        .last()
        .ok_or_else(|| Error::BadParameter("empty chain".into()))?;
    for (i, w) in chain.windows(2).enumerate() {
        if w[0].dim() != w[1].dim() {
            return Err(Error::DimensionMismatch {
                expected: w[0].dim(),
                actual: w[1].dim(),
            });
        }
        if qpe_leq(&w[0], &w[1], cfg)?.fails() {
            return Err(Error::NotAChain(i));
        }
    }
    if chain.len() >= 2 {
        let step = chain[chain.len() - 2].distance(last);
        if step >= CONVERGENCE_TOL {
            return Err(Error::NotConverged(step));
        }
    }
    Ok(last.clone())
}

/// `D_{1/k}(ρ)` for `k = 1..=len`, an increasing chain with supremum `ρ`.
pub fn depolarizing_chain(rho: &DensityMatrix, len: usize) -> Result<Vec<DensityMatrix>> {
    (1..=len).map(|k| depolarize(rho, 1.0 / k as f64)).collect()
}

/// Closed-form supremum of [`depolarizing_chain`] and the distance of its
/// `k`-th element to it, `||ρ − ⊥|| / k`.
pub fn depolarizing_chain_limit(rho: &DensityMatrix, k: usize) -> (DensityMatrix, f64) {
    let gap = rho.distance(&DensityMatrix::maximally_mixed(rho.dim()));
    (rho.clone(), gap / k as f64)
}

/// Verdict of `(1 − t)ρ + tκ ⊑ (1 − t)σ + tκ` for a chain `κ ⊑ ρ ⊑ σ`.
pub fn mixing_monotone_check(
    kappa: &DensityMatrix,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<OrderVerdict> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadParameter(format!("mixing parameter {t} outside [0, 1]")));
    }
    if qpe_leq(kappa, rho, cfg)?.fails() || qpe_leq(rho, sigma, cfg)?.fails() {
        return Err(Error::PreconditionViolated("states do not form a chain".into()));
    }
    qpe_leq(&rho.mix(kappa, t)?, &sigma.mix(kappa, t)?, cfg)
}
