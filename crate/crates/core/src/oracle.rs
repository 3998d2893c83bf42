//! Independent checks and counterexample constructors.
//!
//! Nothing here goes through the order predicates it is meant to check:
//! the probes use sampled Rayleigh quotients and plain ratio arithmetic.

use rand::Rng;
use serde::Serialize;

use crate::bayes::{fls_update, is_agreeing, random_agreeing_effect};
use crate::channel::maximally_entangled;
use crate::divergence::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianMatrix, Subsystem};
use crate::orders::{is_majorized_by, qpe_leq};
use crate::random::{random_hermitian, random_psd, random_state, random_vector};
use crate::state::{DensityMatrix, Effect};
use crate::tolerance::ToleranceConfig;
use crate::verdict::{OrderVerdict, Relation};

/// Smallest sampled Rayleigh quotient `v†Av` over random unit vectors.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub min_quotient: f64,
    pub witness: CVector,
    /// `Fails` only when the sampled minimum is below the failure band of
    /// the PSD rule, so a probe failure always implies an eigenvalue failure.
    pub relation: Relation,
}

pub fn psd_probe<R: Rng + ?Sized>(a: &HermitianMatrix, trials: usize, rng: &mut R, cfg: &ToleranceConfig) -> ProbeResult {
    let n = a.dim();
    let mut best = f64::INFINITY;
    let mut witness = CVector::zeros(n);
    for _ in 0..trials.max(1) {
        let v = random_vector(n, rng);
        let q = a.expectation(&v);
        if q < best {
            best = q;
            witness = v;
        }
    }
    let scale = 1f64.max(a.operator_norm());
    let band = cfg.psd_slack * scale;
    let relation = if best < -10.0 * band {
        Relation::Fails
    } else if best >= -band {
        Relation::Holds
    } else {
        Relation::Marginal
    };
    ProbeResult {
        min_quotient: best,
        witness,
        relation,
    }
}

/// Ratio test `y_i / y⁺ ≤ x_i / x⁺` for diagonal states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalVerdict {
    /// `min_i (x_i / x⁺ − y_i / y⁺)`.
    pub slack: f64,
}

impl DiagonalVerdict {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

pub fn diagonal_order_oracle(x: &[f64], y: &[f64]) -> Result<DiagonalVerdict> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let xp = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let yp = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| xi / xp - yi / yp)
        .fold(f64::INFINITY, f64::min);
    Ok(DiagonalVerdict { slack })
}

/// Facts certified by [`partial_trace_counterexample`].
#[derive(Debug, Clone)]
pub struct PartialTraceReport {
    pub rho: DensityMatrix,
    pub entangled: DensityMatrix,
    pub t: f64,
    /// `ρ ⊑ P`.
    pub upstairs: OrderVerdict,
    /// `||tr₂ P − ⊥_n||`.
    pub reduced_entangled_gap: f64,
    pub reduced_rho: DensityMatrix,
    /// `tr₂ ρ ⊑ ⊥_n`, which must fail for the partial trace to be
    /// non-monotone.
    pub downstairs: OrderVerdict,
}

impl PartialTraceReport {
    pub fn certified(&self) -> bool {
        self.upstairs.holds() && self.reduced_entangled_gap < 1e-12 && self.downstairs.fails()
    }
}

/// Builds `ρ = tP + (1 − t)A` with `P` maximally entangled on `C^n ⊗ C^n`
/// and `A` a random state orthogonal to `P`.
pub fn partial_trace_counterexample<R: Rng + ?Sized>(
    n: usize,
    t: f64,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<PartialTraceReport> {
    check_counterexample_params(n, t)?;
    let p = maximally_entangled(n);
    let q = (&HermitianMatrix::identity(n * n) - p.matrix()).into_matrix();
    let a = random_psd(n * n, n * n, rng).conjugate_by(&q);
    let a = DensityMatrix::normalized(a, cfg)?;
    partial_trace_counterexample_with(n, t, &a, cfg)
}

fn check_counterexample_params(n: usize, t: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::BadParameter("need n >= 2".into()));
    }
    if !(0.5..1.0).contains(&t) {
        return Err(Error::BadParameter(format!("weight {t} outside [1/2, 1)")));
    }
    Ok(())
}

/// As [`partial_trace_counterexample`] with a caller-chosen `A`.
pub fn partial_trace_counterexample_with(
    n: usize,
    t: f64,
    a: &DensityMatrix,
    cfg: &ToleranceConfig,
) -> Result<PartialTraceReport> {
    check_counterexample_params(n, t)?;
    if a.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: a.dim(),
        });
    }
    let p = maximally_entangled(n);
    if a.matrix().hs_inner(p.matrix()).abs() > 1e-12 {
        return Err(Error::PreconditionViolated("A is not orthogonal to P".into()));
    }
    let bottom = DensityMatrix::maximally_mixed(n);
    let reduced_a = a.matrix().partial_trace((n, n), Subsystem::Second)?;
    if reduced_a.distance(bottom.matrix()) < 1e-9 {
        return Err(Error::DegenerateDraw("tr₂ A is the completely mixed state".into()));
    }
    let rho = p.mix(a, 1.0 - t)?;
    let upstairs = qpe_leq(&rho, &p, cfg)?;
    let reduced_p = p.matrix().partial_trace((n, n), Subsystem::Second)?;
    let reduced_rho = DensityMatrix::new(rho.matrix().partial_trace((n, n), Subsystem::Second)?, cfg)?;
    let downstairs = qpe_leq(&reduced_rho, &bottom, cfg)?;
    Ok(PartialTraceReport {
        reduced_entangled_gap: reduced_p.distance(bottom.matrix()),
        rho,
        entangled: p,
        t,
        upstairs,
        reduced_rho,
        downstairs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorizationPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub qpe: Relation,
    pub qpe_slack: f64,
    pub x_majorized_by_y: bool,
    pub y_majorized_by_x: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub qpe: Relation,
    pub qpe_slack: f64,
    pub entropy_x: f64,
    pub entropy_y: f64,
    pub entropy_increases: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    /// Ordered pair that is incomparable under majorization.
    pub majorization: MajorizationPair,
    /// Ordered pair whose von Neumann entropy goes up.
    pub entropy: EntropyPair,
}

pub const MAJORIZATION_PAIR: ([f64; 3], [f64; 3]) = ([0.46, 0.46, 0.08], [0.7, 0.2, 0.1]);

pub const ENTROPY_PAIR: ([f64; 4], [f64; 4]) = (
    [30.0 / 80.0, 29.0 / 80.0, 11.0 / 80.0, 10.0 / 80.0],
    [34.0 / 80.0, 23.0 / 80.0, 12.0 / 80.0, 11.0 / 80.0],
);

pub fn majorization_pair(x: &[f64], y: &[f64], cfg: &ToleranceConfig) -> Result<MajorizationPair> {
    let v = qpe_leq(&DensityMatrix::from_diagonal(x, cfg)?, &DensityMatrix::from_diagonal(y, cfg)?, cfg)?;
    Ok(MajorizationPair {
        x: x.to_vec(),
        y: y.to_vec(),
        qpe: v.relation,
        qpe_slack: v.slack,
        x_majorized_by_y: is_majorized_by(x, y)?,
        y_majorized_by_x: is_majorized_by(y, x)?,
    })
}

pub fn entropy_pair(x: &[f64], y: &[f64], cfg: &ToleranceConfig) -> Result<EntropyPair> {
    let (sx, sy) = (DensityMatrix::from_diagonal(x, cfg)?, DensityMatrix::from_diagonal(y, cfg)?);
    let v = qpe_leq(&sx, &sy, cfg)?;
    let (hx, hy) = (von_neumann_entropy(&sx, cfg), von_neumann_entropy(&sy, cfg));
    Ok(EntropyPair {
        x: x.to_vec(),
        y: y.to_vec(),
        qpe: v.relation,
        qpe_slack: v.slack,
        entropy_x: hx,
        entropy_y: hy,
        entropy_increases: hx < hy,
    })
}

/// Recomputes both stored pairs from scratch.
pub fn counterexample_suite(cfg: &ToleranceConfig) -> Result<CounterexampleReport> {
    Ok(CounterexampleReport {
        majorization: majorization_pair(&MAJORIZATION_PAIR.0, &MAJORIZATION_PAIR.1, cfg)?,
        entropy: entropy_pair(&ENTROPY_PAIR.0, &ENTROPY_PAIR.1, cfg)?,
    })
}

/// Clamps the spectrum of a Hermitian matrix into `[0, 1]`.
pub fn clip_to_effect(m: &HermitianMatrix, cfg: &ToleranceConfig) -> Effect {
    let clipped = m.eig().map(|l| l.clamp(0.0, 1.0));
    Effect::new(clipped, cfg).expect("spectrum clamped into [0, 1]")
}

/// Randomized search for an agreeing effect `E` with
/// `fls_update(ρ, E) = σ` within `1e-8`.
///
/// Candidates are the unit-norm sandwich `ρ^{-1/2}σρ^{-1/2}` (clipped),
/// random perturbations and rescalings of it, and fresh agreeing effects.
pub fn search_agreeing_effect<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    trials: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<Option<Effect>> {
    let n = rho.dim();
    let inv_root = rho.power(-0.5, cfg);
    let natural = sigma.matrix().conjugate_by(inv_root.as_matrix());
    let natural = natural.scale(1.0 / natural.operator_norm().max(f64::MIN_POSITIVE));
    let accept = |e: &Effect| -> Result<bool> {
        if !is_agreeing(rho, e, cfg)? {
            return Ok(false);
        }
        Ok(match fls_update(rho, e, cfg) {
            Ok(out) => out.distance(sigma) < 1e-8,
            Err(Error::ZeroProbability(_)) => false,
            Err(other) => return Err(other),
        })
    };
    for trial in 0..trials {
        let candidate = match trial {
            0 => clip_to_effect(&natural, cfg),
            _ if trial % 3 == 0 => random_agreeing_effect(rho, rng, cfg),
            _ => {
                let eps = 10f64.powf(-rng.random_range(1.0..9.0));
                let scale = rng.random_range(0.5..1.0);
                let noise = random_hermitian(n, rng);
                clip_to_effect(&natural.combine(scale, &noise, eps), cfg)
            }
        };
        if accept(&candidate)? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// `ρ ⊑ σ` drawn by updating a random prior on random agreeing evidence.
pub fn random_comparable_pair<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let rho = random_state(dim, dim, rng)?;
    let e = random_agreeing_effect(&rho, rng, cfg);
    let sigma = fls_update(&rho, &e, cfg)?;
    Ok((rho, sigma))
}

/// Independent random states with `ρ ⋢ σ` by a slack margin of at least
/// `margin`.
pub fn random_unordered_pair<R: Rng + ?Sized>(
    dim: usize,
    margin: f64,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<(DensityMatrix, DensityMatrix)> {
    loop {
        let rho = random_state(dim, dim, rng)?;
        let sigma = random_state(dim, dim, rng)?;
        if qpe_leq(&rho, &sigma, cfg)?.slack < -margin {
            return Ok((rho, sigma));
        }
    }
}
