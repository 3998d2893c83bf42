//! Sandwiched Rényi entropies and divergences.
//!
//! Orders `α = 1` and `α = ∞` go to dedicated closed forms. All values are
//! computed in nats and converted to the configured base at the end.

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{fidelity, HermitianMatrix};
use crate::orders::qpe_leq;
use crate::random::random_effect;
use crate::state::{DensityMatrix, ProbabilityVector};
use crate::tolerance::{LogBase, ToleranceConfig};
use crate::verdict::OrderVerdict;

/// Order parameter of the Rényi family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(f64),
    Infinite,
}

impl Alpha {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Alpha::Infinite),
            other => {
                let a: f64 = other
                    .parse()
                    .map_err(|_| Error::BadParameter(format!("cannot parse alpha '{other}'")))?;
                Alpha::new(a)
            }
        }
    }

    pub fn new(a: f64) -> Result<Self> {
        if a == f64::INFINITY {
            Ok(Alpha::Infinite)
        } else if a.is_finite() && a > 0.0 {
            Ok(Alpha::Finite(a))
        } else {
            Err(Error::BadAlpha(a))
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Alpha::Finite(a) => s.serialize_f64(*a),
            Alpha::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Extended real divergence value; `+∞` exactly when the support condition
/// is violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceValue {
    #[serde(serialize_with = "extended_real")]
    pub value: f64,
    pub alpha: Alpha,
    pub base: LogBase,
    pub support_violation: bool,
}

impl DivergenceValue {
    fn finite(nats: f64, alpha: Alpha, base: LogBase) -> Self {
        DivergenceValue {
            value: base.from_nats(nats),
            alpha,
            base,
            support_violation: false,
        }
    }

    fn infinite(alpha: Alpha, base: LogBase) -> Self {
        DivergenceValue {
            value: f64::INFINITY,
            alpha,
            base,
            support_violation: true,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

/// Serializes `+∞` as the string `"inf"` since JSON has no infinity.
pub fn extended_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            actual: b,
        });
    }
    Ok(())
}

fn positive_eigenvalues<'a>(rho: &'a DensityMatrix, cfg: &'a ToleranceConfig) -> impl Iterator<Item = f64> + 'a {
    let cut = cfg.rank_cutoff * rho.top_eigenvalue();
    rho.eigenvalues().iter().copied().filter(move |&l| l > cut)
}

/// von Neumann entropy `-tr ρ log ρ` in nats.
fn von_neumann_nats(rho: &DensityMatrix, cfg: &ToleranceConfig) -> f64 {
    -positive_eigenvalues(rho, cfg).map(|l| l * l.ln()).sum::<f64>()
}

/// `H_α(ρ) = log tr(ρ^α) / (1 - α)`, with the von Neumann entropy at `α = 1`
/// and the min-entropy at `α = ∞`.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: Alpha, cfg: &ToleranceConfig) -> f64 {
    let nats = match alpha {
        Alpha::Infinite => -rho.top_eigenvalue().ln(),
        Alpha::Finite(a) if a == 1.0 => von_neumann_nats(rho, cfg),
        Alpha::Finite(a) => {
            let tr: f64 = positive_eigenvalues(rho, cfg).map(|l| l.powf(a)).sum();
            tr.ln() / (1.0 - a)
        }
    };
    // tiny negative values from rounding on pure states
    cfg.log_base.from_nats(nats.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityMatrix, cfg: &ToleranceConfig) -> f64 {
    renyi_entropy(rho, Alpha::Finite(1.0), cfg)
}

/// Whether `supp σ ⊆ supp ρ`, tested as `||(I - P_ρ) σ (I - P_ρ)|| < rank_cutoff`.
pub fn support_contained(sigma: &DensityMatrix, rho: &DensityMatrix, cfg: &ToleranceConfig) -> bool {
    let n = rho.dim();
    let off = &HermitianMatrix::identity(n) - &rho.support_projector(cfg);
    sigma.matrix().conjugate_by(off.as_matrix()).operator_norm() < cfg.rank_cutoff
}

/// Sandwiched Rényi divergence `D_α(σ‖ρ)`.
pub fn renyi_divergence(
    sigma: &DensityMatrix,
    rho: &DensityMatrix,
    alpha: Alpha,
    cfg: &ToleranceConfig,
) -> Result<DivergenceValue> {
    same_dim(rho.dim(), sigma.dim())?;
    let base = cfg.log_base;
    let a = match alpha {
        Alpha::Infinite => return max_divergence(sigma, rho, cfg),
        Alpha::Finite(a) if !(a > 0.0 && a.is_finite()) => return Err(Error::BadAlpha(a)),
        Alpha::Finite(a) => a,
    };
    if a == 1.0 {
        return relative_entropy(sigma, rho, cfg);
    }
    if a > 1.0 && !support_contained(sigma, rho, cfg) {
        return Ok(DivergenceValue::infinite(alpha, base));
    }
    let p = (1.0 - a) / (2.0 * a);
    let side = rho.power(p, cfg);
    let inner = sigma.matrix().conjugate_by(side.as_matrix());
    let spec = inner.eig();
    let cut = cfg.rank_cutoff * spec.max().max(0.0);
    let tr: f64 = spec.values().iter().filter(|&&l| l > cut).map(|&l| l.powf(a)).sum();
    if !(tr > 0.0) {
        // orthogonal supports with α < 1
        return Ok(DivergenceValue::infinite(alpha, base));
    }
    Ok(DivergenceValue::finite((tr.ln() / (a - 1.0)).max(0.0), alpha, base))
}

/// Umegaki relative entropy `tr σ (log σ − log ρ)`.
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<DivergenceValue> {
    same_dim(rho.dim(), sigma.dim())?;
    let alpha = Alpha::Finite(1.0);
    if !support_contained(sigma, rho, cfg) {
        return Ok(DivergenceValue::infinite(alpha, cfg.log_base));
    }
    let cut = cfg.rank_cutoff * rho.top_eigenvalue();
    let log_rho = rho.spectrum().map(|l| if l > cut { l.ln() } else { 0.0 });
    let cross = sigma.matrix().hs_inner(&log_rho);
    let nats = -von_neumann_nats(sigma, cfg) - cross;
    Ok(DivergenceValue::finite(nats.max(0.0), alpha, cfg.log_base))
}

/// `D_∞(σ‖ρ) = log ||ρ^{-1/2} σ ρ^{-1/2}||` with the generalized inverse,
/// or `+∞` when `supp σ ⊄ supp ρ`.
pub fn max_divergence(sigma: &DensityMatrix, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<DivergenceValue> {
    same_dim(rho.dim(), sigma.dim())?;
    if !support_contained(sigma, rho, cfg) {
        return Ok(DivergenceValue::infinite(Alpha::Infinite, cfg.log_base));
    }
    let inv_root = rho.power(-0.5, cfg);
    let norm = sigma.matrix().conjugate_by(inv_root.as_matrix()).operator_norm();
    Ok(DivergenceValue::finite(norm.ln(), Alpha::Infinite, cfg.log_base))
}

/// `log max_i x_i / y_i` over the support of `x`.
pub fn classical_max_divergence(x: &ProbabilityVector, y: &ProbabilityVector, base: LogBase) -> Result<f64> {
    same_dim(x.len(), y.len())?;
    let mut best = f64::NEG_INFINITY;
    for (&xi, &yi) in x.as_slice().iter().zip(y.as_slice()) {
        if xi <= 0.0 {
            continue;
        }
        if yi <= 0.0 {
            return Ok(f64::INFINITY);
        }
        best = best.max(xi / yi);
    }
    Ok(base.from_nats(best.ln()))
}

/// Sampled lower bound `log max_M tr(σM) / tr(ρM)` over effects `M`.
///
/// Candidates: the projector onto `ρ^{-1/2} w` for each eigenvector `w`
/// of the sandwiched operator (the top one attains the supremum), the
/// computational basis projectors, and `trials` random effects.
pub fn povm_distinguishability_lower_bound<R: Rng + ?Sized>(
    sigma: &DensityMatrix,
    rho: &DensityMatrix,
    trials: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    if trials == 0 {
        return Err(Error::BadParameter("need at least one trial".into()));
    }
    let n = rho.dim();
    let mut candidates: Vec<HermitianMatrix> = Vec::new();

    let inv_root = rho.power(-0.5, cfg);
    let sandwiched = sigma.matrix().conjugate_by(inv_root.as_matrix()).eig();
    for i in 0..n {
        let u = inv_root.as_matrix() * sandwiched.vector(i);
        let norm = u.norm();
        if norm > 0.0 {
            candidates.push(HermitianMatrix::outer(&u.unscale(norm)));
        }
    }
    for i in 0..n {
        candidates.push(HermitianMatrix::symmetric_unit(n, i, i, 1.0));
    }
    for _ in 0..trials {
        candidates.push(random_effect(n, rng).matrix().clone());
    }

    let floor = cfg.rank_cutoff;
    let mut best = f64::NEG_INFINITY;
    for m in &candidates {
        let ps = sigma.matrix().hs_inner(m);
        let pr = rho.matrix().hs_inner(m);
        if pr <= floor {
            if ps > floor {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        best = best.max(ps / pr);
    }
    Ok(cfg.log_base.from_nats(best.ln()))
}

/// Gap `D_∞(σ‖ρ) − (H_∞(ρ) − H_∞(σ))` together with the order verdict.
/// The gap vanishes exactly when `ρ ⊑ σ`.
pub fn order_divergence_gap(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    cfg: &ToleranceConfig,
) -> Result<(f64, OrderVerdict)> {
    let d = max_divergence(sigma, rho, cfg)?.value;
    let h = renyi_entropy(rho, Alpha::Infinite, cfg) - renyi_entropy(sigma, Alpha::Infinite, cfg);
    Ok((d - h, qpe_leq(rho, sigma, cfg)?))
}

/// `-log F²(σ, ρ)`, the `α = 1/2` member in closed form.
pub fn fidelity_divergence(sigma: &DensityMatrix, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    let f = fidelity(sigma.matrix(), rho.matrix(), cfg)?;
    Ok(cfg.log_base.from_nats(-2.0 * f.ln()))
}
