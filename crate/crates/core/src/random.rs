//! Seeded random states, unitaries, effects and channels.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::state::{DensityMatrix, Effect, ProbabilityVector};
use crate::tolerance::ToleranceConfig;

/// Deterministic generator used by every seeded entry point.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary
/// parts.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::symmetrized(ginibre(n, n, rng))
}

/// `G G†` for a Ginibre `G` of shape `n × rank` (unnormalized).
pub fn random_psd<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> HermitianMatrix {
    let g = ginibre(n, rank, rng);
    HermitianMatrix::symmetrized(&g * g.adjoint())
}

/// Random density matrix `G G† / tr(G G†)` of the requested rank.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::BadParameter(format!(
            "need 1 <= rank <= dim, got rank {rank} for dim {dim}"
        )));
    }
    DensityMatrix::normalized(random_psd(dim, rank, rng), &ToleranceConfig::default())
}

/// Random diagonal state drawn uniformly from the probability simplex.
pub fn random_diagonal_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let p = random_probability_vector(dim, rng);
    DensityMatrix::from_diagonal(p.as_slice(), &ToleranceConfig::default())
        .expect("simplex sample is a valid state")
}

pub fn random_probability_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbabilityVector {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    ProbabilityVector::new(raw.iter().map(|x| x / total).collect()).expect("normalized by construction")
}

/// Orthonormal columns from modified Gram–Schmidt on a Ginibre matrix.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let mut q = ginibre(rows, cols, rng);
    for j in 0..cols {
        for k in 0..j {
            let qk = q.column(k).into_owned();
            let overlap = qk.dotc(&q.column(j));
            let update = q.column(j) - qk * overlap;
            q.set_column(j, &update);
        }
        let norm = q.column(j).norm();
        let unit = q.column(j) / Complex64::new(norm, 0.0);
        q.set_column(j, &unit);
    }
    q
}

/// Haar-random unitary.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    random_isometry(n, n, rng)
}

/// Random effect with spectrum drawn uniformly from `[0, 1]`.
pub fn random_effect<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Effect {
    let u = random_unitary(n, rng);
    let diag: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let m = HermitianMatrix::from_real_diagonal(&diag).conjugate_by(&u);
    Effect::new(m, &ToleranceConfig::default()).expect("spectrum in [0, 1]")
}

/// Random state `U diag(λ) U†` with eigenvalues spread log-uniformly over
/// `decades` orders of magnitude.
pub fn random_spread_state<R: Rng + ?Sized>(dim: usize, decades: f64, rng: &mut R) -> DensityMatrix {
    let u = random_unitary(dim, rng);
    let raw: Vec<f64> = (0..dim).map(|_| 10f64.powf(-decades * rng.random::<f64>())).collect();
    let total: f64 = raw.iter().sum();
    let diag: Vec<f64> = raw.iter().map(|x| x / total).collect();
    DensityMatrix::new(HermitianMatrix::from_real_diagonal(&diag).conjugate_by(&u), &ToleranceConfig::default())
        .expect("positive spectrum summing to one")
}

/// Random effect whose eigenvalues sit within `0.1` of either 0 or 1.
pub fn random_sharp_effect<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Effect {
    let u = random_unitary(n, rng);
    let diag: Vec<f64> = (0..n)
        .map(|_| {
            let x = 0.1 * rng.random::<f64>();
            if rng.random::<bool>() {
                1.0 - x
            } else {
                x
            }
        })
        .collect();
    let m = HermitianMatrix::from_real_diagonal(&diag).conjugate_by(&u);
    Effect::new(m, &ToleranceConfig::default()).expect("spectrum in [0, 1]")
}

/// Random CPTP map `M_n → M_k` with `kraus_rank` Kraus operators, obtained
/// by slicing a random isometry `C^n → C^k ⊗ C^r`.
pub fn random_channel<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    kraus_rank: usize,
    rng: &mut R,
) -> Result<Channel> {
    if in_dim == 0 || out_dim == 0 || kraus_rank == 0 || out_dim * kraus_rank < in_dim {
        return Err(Error::BadParameter(format!(
            "cannot build a channel {in_dim} -> {out_dim} with Kraus rank {kraus_rank}"
        )));
    }
    let v = random_isometry(out_dim * kraus_rank, in_dim, rng);
    let kraus = (0..kraus_rank)
        .map(|a| v.rows(a * out_dim, out_dim).into_owned())
        .collect();
    Channel::from_kraus(in_dim, out_dim, kraus, &ToleranceConfig::default())
}
