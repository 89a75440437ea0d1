//! Shared fixtures for the benchmark targets: deterministic structures and
//! point clouds so runs are comparable across machines and commits.

use ars3d::gen;
use ars3d::sample::sample_point;
use ars3d::{Ars, GroupPoint, ThetaForm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const BENCH_SEED: u64 = 0xBE5C;

/// One valid structure per θ family representative, deterministic.
pub fn fixture_structures() -> Vec<(ThetaForm, Ars)> {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED);
    [
        ThetaForm::jordan(),
        ThetaForm::diagonal(1.0).unwrap(),
        ThetaForm::diagonal(-1.0).unwrap(),
        ThetaForm::diagonal(0.3).unwrap(),
        ThetaForm::rotation(0.7).unwrap(),
    ]
    .into_iter()
    .map(|theta| (theta, gen::random_valid_ars(&mut rng, theta)))
    .collect()
}

/// A deterministic point cloud in the standard sampling box.
pub fn fixture_points(n: usize) -> Vec<GroupPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED ^ 1);
    (0..n).map(|_| sample_point(&mut rng, 2.0, 2.0)).collect()
}
