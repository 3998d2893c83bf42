//! Reference computations that avoid the library's eigensolver paths.
#![allow(dead_code)]

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use qpe_core::{CMatrix, DensityMatrix};

/// `A + shift·I` admits a Cholesky factor, tested on the real embedding
/// `[[X, −Y], [Y, X]]` of `A = X + iY`.
pub fn cholesky_psd(a: &CMatrix, shift: f64) -> bool {
    let n = a.nrows();
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = a[(r % n, c % n)];
        let v = match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        if r == c { v + shift } else { v }
    });
    Cholesky::new(real).is_some()
}

/// Smallest `λ` in `[lo, hi]` with `λ·B − A ≥ 0`, by bisection on
/// Cholesky feasibility.
pub fn bisect_scale(a: &CMatrix, b: &CMatrix, mut lo: f64, mut hi: f64) -> f64 {
    let feasible = |l: f64| cholesky_psd(&(b * Complex64::new(l, 0.0) - a), 1e-300);
    assert!(feasible(hi), "upper bracket infeasible");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// Largest eigenvalue of a PSD matrix.
pub fn top_eigenvalue(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let bound: f64 = a.iter().map(|z| z.norm()).sum();
    bisect_scale(a, &CMatrix::identity(n, n), 0.0, bound + 1.0)
}

/// `D_∞(σ‖ρ) = ln min{λ : σ ≤ λρ}` for full-rank `ρ`.
pub fn max_divergence(sigma: &DensityMatrix, rho: &DensityMatrix) -> f64 {
    let s = sigma.matrix().as_matrix();
    let r = rho.matrix().as_matrix();
    let mut hi = 2.0;
    while !cholesky_psd(&(r * Complex64::new(hi, 0.0) - s), 1e-300) {
        hi *= 2.0;
    }
    bisect_scale(s, r, 0.0, hi).ln()
}

/// `σ⁺ρ − ρ⁺σ ≥ −tol` with top eigenvalues found by bisection.
pub fn qpe_holds(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> bool {
    let r = rho.matrix().as_matrix();
    let s = sigma.matrix().as_matrix();
    let diff = r * Complex64::new(top_eigenvalue(s), 0.0) - s * Complex64::new(top_eigenvalue(r), 0.0);
    cholesky_psd(&diff, tol)
}

/// Ratio form `y_i/y⁺ ≤ x_i/x⁺` of the diagonal order.
pub fn diagonal_qpe_slack(x: &[f64], y: &[f64]) -> f64 {
    let xm = x.iter().cloned().fold(f64::MIN, f64::max);
    let ym = y.iter().cloned().fold(f64::MIN, f64::max);
    x.iter().zip(y).map(|(a, b)| a / xm - b / ym).fold(f64::INFINITY, f64::min)
}

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// `x ≺ y`: every prefix sum of sorted `x` is at most that of sorted `y`.
pub fn majorized_by(x: &[f64], y: &[f64]) -> bool {
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    };
    let (xs, ys) = (sorted(x), sorted(y));
    let (mut a, mut b) = (0.0, 0.0);
    xs.iter().zip(&ys).all(|(u, v)| {
        a += u;
        b += v;
        a <= b + 1e-15
    })
}

pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
