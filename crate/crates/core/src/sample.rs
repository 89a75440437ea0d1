//! Deterministic sampling of group points and tangent directions for the
//! probabilistic checks (nonempty complement, isometry verification).
//!
//! All consumers draw through a seeded ChaCha stream so every run of every
//! binary sees the same points.

use crate::group::{GroupPoint, Tangent};
use crate::linalg2::Vec2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default seed shared by every deterministic sampler.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Sampling configuration: number of base points, RNG seed, and the box
/// half-widths (|t| ≤ t_box, ‖v‖ ≤ v_box).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCfg {
    pub samples: usize,
    pub seed: u64,
    pub t_box: f64,
    pub v_box: f64,
}

impl Default for SampleCfg {
    fn default() -> Self {
        SampleCfg { samples: 1000, seed: DEFAULT_SEED, t_box: 2.0, v_box: 2.0 }
    }
}

impl SampleCfg {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// One point, t uniform on the interval, v uniform on the disk (rejection).
pub fn sample_point(rng: &mut impl Rng, t_box: f64, v_box: f64) -> GroupPoint {
    let t = rng.gen_range(-t_box..=t_box);
    let v = loop {
        let x = rng.gen_range(-1.0..=1.0);
        let y = rng.gen_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            break Vec2::new(x * v_box, y * v_box);
        }
    };
    GroupPoint::new(t, v)
}

/// The deterministic base-point cloud for a configuration.
pub fn sample_points(cfg: &SampleCfg) -> Vec<GroupPoint> {
    let mut rng = cfg.rng();
    (0..cfg.samples)
        .map(|_| sample_point(&mut rng, cfg.t_box, cfg.v_box))
        .collect()
}

/// A random unit tangent direction.
pub fn sample_tangent(rng: &mut impl Rng) -> Tangent {
    loop {
        let dt: f64 = rng.gen_range(-1.0..=1.0);
        let dx: f64 = rng.gen_range(-1.0..=1.0);
        let dy: f64 = rng.gen_range(-1.0..=1.0);
        let n = (dt * dt + dx * dx + dy * dy).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return Tangent::new(dt / n, Vec2::new(dx / n, dy / n));
        }
    }
}
