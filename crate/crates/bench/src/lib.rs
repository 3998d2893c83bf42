//! Fixture generators shared by the benchmarks.

use qpe_core::oracle::{random_comparable_pair, random_unordered_pair};
use qpe_core::random::{random_channel, seeded};
use qpe_core::{Channel, DensityMatrix, ToleranceConfig};

pub fn comparable_pairs(dim: usize, count: usize, seed: u64) -> Vec<(DensityMatrix, DensityMatrix)> {
    let cfg = ToleranceConfig::default();
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| random_comparable_pair(dim, &mut rng, &cfg).expect("valid dimension"))
        .collect()
}

pub fn unordered_pairs(dim: usize, count: usize, seed: u64) -> Vec<(DensityMatrix, DensityMatrix)> {
    let cfg = ToleranceConfig::default();
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| random_unordered_pair(dim, 1e-6, &mut rng, &cfg).expect("valid dimension"))
        .collect()
}

pub fn channel_pairs(dim: usize, count: usize, seed: u64) -> Vec<(Channel, Channel)> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let a = random_channel(dim, dim, 2, &mut rng).expect("valid signature");
            let b = random_channel(dim, dim, 2, &mut rng).expect("valid signature");
            (a, b)
        })
        .collect()
}
