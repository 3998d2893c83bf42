//! Order predicates on probability vectors and density matrices.
//!
//! Every quantum order here reduces to a positivity test of an "order
//! inequality" matrix; the verdict carries that matrix's smallest
//! eigenvalue as slack.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianMatrix};
use crate::state::{subspace_intersects, DensityMatrix, ProbabilityVector, Subspace};
use crate::tolerance::ToleranceConfig;
use crate::verdict::OrderVerdict;

/// Projector distance below which two kernels count as equal.
pub const KERNEL_MATCH_TOL: f64 = 1e-8;

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            actual: b,
        });
    }
    Ok(())
}

fn unit(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// Classical positive-evidence order: `x ⊑ y` iff `y_i / y⁺ ≤ x_i / x⁺`
/// for every `i`, tested as `y_i x⁺ ≤ x_i y⁺` with the shared slack band.
pub fn classical_pe_leq(
    x: &ProbabilityVector,
    y: &ProbabilityVector,
    cfg: &ToleranceConfig,
) -> Result<OrderVerdict> {
    same_dim(x.len(), y.len())?;
    let (xp, yp) = (x.max(), y.max());
    let (worst, slack) = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(xi, yi)| xi * yp - yi * xp)
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
    Ok(OrderVerdict::from_slack(slack, 1.0, cfg, unit(x.len(), worst)))
}

/// `σ⁺ρ − ρ⁺σ`.
pub fn order_inequality(rho: &DensityMatrix, sigma: &DensityMatrix) -> HermitianMatrix {
    rho.matrix()
        .combine(sigma.top_eigenvalue(), sigma.matrix(), -rho.top_eigenvalue())
}

/// Quantum positive-evidence order `ρ ⊑ σ ⟺ σ⁺ρ − ρ⁺σ ≥ 0`.
pub fn qpe_leq(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &ToleranceConfig) -> Result<OrderVerdict> {
    same_dim(rho.dim(), sigma.dim())?;
    Ok(order_inequality(rho, sigma).is_psd(cfg))
}

/// Whether `ker(a) ⊆ ker(b)` numerically.
pub fn kernel_contained(a: &Subspace, b: &Subspace) -> bool {
    if a.dim() == 0 {
        return true;
    }
    let pa = a.projector();
    let pb = b.projector();
    let inside = pb.as_matrix() * pa.as_matrix();
    (inside - pa.as_matrix()).norm() < KERNEL_MATCH_TOL
}

/// Least-eigenvalue order `⊑⁻`.
///
/// Holds when either the kernels agree and `ρ⁻σ − σ⁻ρ ≥ 0`, or `ker(ρ)` is
/// strictly contained in `ker(σ)` and the least nonzero eigenspace of `ρ`
/// meets `ker(σ)`.
pub fn lev_leq(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &ToleranceConfig) -> Result<OrderVerdict> {
    same_dim(rho.dim(), sigma.dim())?;
    let ker_rho = rho.kernel(cfg);
    let ker_sigma = sigma.kernel(cfg);
    let equal = ker_rho.dim() == ker_sigma.dim()
        && ker_rho.projector().distance(&ker_sigma.projector()) < KERNEL_MATCH_TOL;
    if equal {
        let rho_low = rho.bottom_eigenspace_nonzero(cfg).eigenvalue;
        let sigma_low = sigma.bottom_eigenspace_nonzero(cfg).eigenvalue;
        let m = sigma.matrix().combine(rho_low, rho.matrix(), -sigma_low);
        return Ok(m.is_psd(cfg));
    }
    let low = rho.bottom_eigenspace_nonzero(cfg);
    let strict = ker_sigma.dim() > ker_rho.dim() && kernel_contained(&ker_rho, &ker_sigma);
    if strict {
        let meets = subspace_intersects(&low.space, &ker_sigma, cfg)?;
        return Ok(OrderVerdict::structural(meets, Some(low.space.vector(0))));
    }
    // Kernels are not nested: pick a kernel vector of ρ that σ does not annihilate.
    let witness = (0..ker_rho.dim())
        .map(|i| ker_rho.vector(i))
        .max_by(|a, b| ker_sigma.residual(a).total_cmp(&ker_sigma.residual(b)))
        .unwrap_or_else(|| low.space.vector(0));
    Ok(OrderVerdict::structural(false, Some(witness)))
}

/// `ρ ⊑′ σ ⟺ σ − ρ ≤ (σ⁺ − ρ⁺) I`.
pub fn primed_leq(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &ToleranceConfig) -> Result<OrderVerdict> {
    same_dim(rho.dim(), sigma.dim())?;
    let gap = sigma.top_eigenvalue() - rho.top_eigenvalue();
    let m = &HermitianMatrix::identity(rho.dim()).scale(gap) - &(sigma.matrix() - rho.matrix());
    Ok(m.is_psd(cfg))
}

/// Catalogue of scalar functionals usable for renormalised orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenormFunctional {
    /// `f(ρ) = ||ρ||`, giving back the positive-evidence order.
    OperatorNorm,
    /// `f(ρ) = ||ρ||_p^r`.
    Schatten { p: f64, r: f64 },
}

impl RenormFunctional {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match *self {
            RenormFunctional::OperatorNorm => Ok(rho.top_eigenvalue()),
            RenormFunctional::Schatten { p, r } => {
                if !(p >= 1.0) || !r.is_finite() {
                    return Err(Error::BadParameter(format!("Schatten functional p={p}, r={r}")));
                }
                let norm = if p.is_infinite() {
                    rho.top_eigenvalue()
                } else {
                    rho.eigenvalues()
                        .iter()
                        .map(|l| l.max(0.0).powf(p))
                        .sum::<f64>()
                        .powf(1.0 / p)
                };
                Ok(norm.powf(r))
            }
        }
    }
}

/// `ρ ⊑^f σ ⟺ f(σ)ρ − f(ρ)σ ≥ 0`.
pub fn f_renormalized_leq(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    f: RenormFunctional,
    cfg: &ToleranceConfig,
) -> Result<OrderVerdict> {
    same_dim(rho.dim(), sigma.dim())?;
    let (fr, fs) = (f.evaluate(rho)?, f.evaluate(sigma)?);
    for v in [fr, fs] {
        if !(v > 0.0) {
            return Err(Error::NonpositiveScalar(v));
        }
    }
    Ok(rho.matrix().combine(fs, sigma.matrix(), -fr).is_psd(cfg))
}

const MAJORIZATION_TOL: f64 = 1e-12;

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `x` majorizes `y` (written `y ≺ x`): every prefix sum of the descending
/// rearrangement of `x` dominates that of `y`.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    same_dim(x.len(), y.len())?;
    let (xs, ys) = (sorted_desc(x), sorted_desc(y));
    let (mut px, mut py) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px < py - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x ≺ y`.
pub fn is_majorized_by(x: &[f64], y: &[f64]) -> Result<bool> {
    majorizes(y, x)
}

/// Which of the three characterising conditions a renormalised order
/// breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum UniquenessViolation {
    /// `⊥_n` is not below this diagonal state.
    BottomNotLeast { state: Vec<f64> },
    /// The state is not below the pure state on its largest entry.
    NotBelowPure { state: Vec<f64> },
    /// `lower ⊑^f upper` but the mixture at weight `t` falls out of the
    /// interval between them.
    ConvexityBroken { lower: Vec<f64>, upper: Vec<f64>, t: f64 },
}

fn simplex_grid(n: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, steps, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / steps as f64).collect())
        .collect()
}

/// Grid search over diagonal states of dimension `n` (simplex grid with
/// spacing `1/steps`) for a violation of: bottom element, pure-state
/// ceiling, or convexity. Only strict failures count; marginal verdicts are
/// skipped.
pub fn find_uniqueness_violation(
    f: RenormFunctional,
    n: usize,
    steps: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<UniquenessViolation>> {
    let grid: Vec<(Vec<f64>, DensityMatrix)> = simplex_grid(n, steps)
        .into_iter()
        .map(|p| {
            let s = DensityMatrix::from_diagonal(&p, cfg)?;
            Ok((p, s))
        })
        .collect::<Result<_>>()?;
    let bottom = DensityMatrix::maximally_mixed(n);
    for (p, s) in &grid {
        if f_renormalized_leq(&bottom, s, f, cfg)?.fails() {
            return Ok(Some(UniquenessViolation::BottomNotLeast { state: p.clone() }));
        }
        let top = p
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, &v)| if v > a.1 { (i, v) } else { a })
            .0;
        let pure = DensityMatrix::pure(&unit(n, top))?;
        if f_renormalized_leq(s, &pure, f, cfg)?.fails() {
            return Ok(Some(UniquenessViolation::NotBelowPure { state: p.clone() }));
        }
    }
    for (p, lo) in &grid {
        for (q, hi) in &grid {
            if !f_renormalized_leq(lo, hi, f, cfg)?.holds() {
                continue;
            }
            for t in [0.25, 0.5, 0.75] {
                let mid = lo.mix(hi, t)?;
                if f_renormalized_leq(lo, &mid, f, cfg)?.fails() || f_renormalized_leq(&mid, hi, f, cfg)?.fails() {
                    return Ok(Some(UniquenessViolation::ConvexityBroken {
                        lower: p.clone(),
                        upper: q.clone(),
                        t,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Relation;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    fn diag(v: &[f64]) -> DensityMatrix {
        DensityMatrix::from_diagonal(v, &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn classical_examples() {
        let cfg = ToleranceConfig::default();
        let y = pv(&[0.7, 0.2, 0.1]);
        assert!(classical_pe_leq(&ProbabilityVector::uniform(3), &y, &cfg).unwrap().holds());
        assert!(classical_pe_leq(&pv(&[0.46, 0.46, 0.08]), &y, &cfg).unwrap().holds());
        let a = pv(&[0.5, 0.3, 0.2]);
        let b = pv(&[0.6, 0.1, 0.3]);
        assert!(classical_pe_leq(&a, &b, &cfg).unwrap().fails());
        assert!(classical_pe_leq(&b, &a, &cfg).unwrap().fails());
        assert!(classical_pe_leq(&a, &pv(&[0.5, 0.5]), &cfg).is_err());
    }

    #[test]
    fn qpe_examples() {
        let cfg = ToleranceConfig::default();
        let v = qpe_leq(&diag(&[0.46, 0.46, 0.08]), &diag(&[0.7, 0.2, 0.1]), &cfg).unwrap();
        assert!(v.holds());
        let v = qpe_leq(&diag(&[0.6, 0.4]), &diag(&[0.8, 0.2]), &cfg).unwrap();
        assert!(v.holds());
        assert!(v.slack.abs() < 1e-15);
        let v = qpe_leq(&diag(&[0.8, 0.2]), &diag(&[0.6, 0.4]), &cfg).unwrap();
        assert_eq!(v.relation, Relation::Fails);
        assert!(v.witness.is_some());
    }

    #[test]
    fn lev_examples() {
        let cfg = ToleranceConfig::default();
        assert!(lev_leq(&diag(&[0.6, 0.4]), &diag(&[0.8, 0.2]), &cfg).unwrap().holds());
        // kernel grows and L⁻(ρ) = span(e2) = ker(σ)
        assert!(lev_leq(&diag(&[0.6, 0.4]), &diag(&[1.0, 0.0]), &cfg).unwrap().holds());
        // kernel grows but on the wrong vector
        assert!(lev_leq(&diag(&[0.6, 0.4]), &diag(&[0.0, 1.0]), &cfg).unwrap().fails());
        let r = diag(&[0.5, 0.3, 0.2]);
        assert!(lev_leq(&r, &r, &cfg).unwrap().holds());
        // kernel shrinks
        assert!(lev_leq(&diag(&[1.0, 0.0]), &diag(&[0.6, 0.4]), &cfg).unwrap().fails());
    }

    #[test]
    fn primed_examples() {
        let cfg = ToleranceConfig::default();
        let v = primed_leq(&diag(&[0.6, 0.4]), &diag(&[0.8, 0.2]), &cfg).unwrap();
        assert!(v.holds());
        assert!((v.slack - 0.0).abs() < 1e-15);
        let r = diag(&[0.5, 0.3, 0.2]);
        assert!(primed_leq(&r, &r, &cfg).unwrap().holds());
    }

    #[test]
    fn f_order_operator_norm_matches_qpe() {
        let cfg = ToleranceConfig::default();
        let (x, y) = (diag(&[0.46, 0.46, 0.08]), diag(&[0.7, 0.2, 0.1]));
        let a = f_renormalized_leq(&x, &y, RenormFunctional::OperatorNorm, &cfg).unwrap();
        let b = qpe_leq(&x, &y, &cfg).unwrap();
        assert_eq!(a.relation, b.relation);
    }

    #[test]
    fn f_order_hilbert_schmidt_against_direct_formula() {
        let cfg = ToleranceConfig::default();
        let bottom = DensityMatrix::maximally_mixed(3);
        let y = diag(&[0.7, 0.2, 0.1]);
        let f = RenormFunctional::Schatten { p: 2.0, r: 1.0 };
        let v = f_renormalized_leq(&bottom, &y, f, &cfg).unwrap();
        // ||y||_2 / 3 - ||⊥||_2 · y_i, smallest at i = 0
        let expected = 0.54f64.sqrt() / 3.0 - (1.0f64 / 3.0).sqrt() * 0.7;
        assert!((v.slack - expected).abs() < 1e-14);
        assert!(v.fails());
    }

    #[test]
    fn uniqueness_falsifier() {
        let cfg = ToleranceConfig::default();
        let hs = RenormFunctional::Schatten { p: 2.0, r: 1.0 };
        assert!(find_uniqueness_violation(hs, 3, 10, &cfg).unwrap().is_some());
        assert!(find_uniqueness_violation(RenormFunctional::OperatorNorm, 3, 10, &cfg)
            .unwrap()
            .is_none());
        let inf = RenormFunctional::Schatten { p: f64::INFINITY, r: 1.0 };
        assert!(find_uniqueness_violation(inf, 3, 6, &cfg).unwrap().is_none());
    }

    #[test]
    fn majorization_examples() {
        let u = [1.0 / 3.0; 3];
        let x = [0.7, 0.2, 0.1];
        assert!(majorizes(&x, &u).unwrap());
        assert!(!majorizes(&u, &x).unwrap());
        assert!(is_majorized_by(&u, &x).unwrap());
        let a = [0.46, 0.46, 0.08];
        assert!(!is_majorized_by(&a, &x).unwrap());
        assert!(!is_majorized_by(&x, &a).unwrap());
        assert!(is_majorized_by(&[0.5, 0.5, 0.0], &[1.0, 0.0, 0.0]).unwrap());
        assert!(majorizes(&x, &[0.5, 0.5]).is_err());
    }
}
