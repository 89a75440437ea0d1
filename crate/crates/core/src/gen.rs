//! Seeded random generators of valid objects. The invariant test suites and
//! the demo command draw admissible fields, distributions, automorphisms,
//! and whole structures from here; everything is deterministic per seed.
//!
//! Generators retry rejected draws and panic after a generous attempt cap;
//! for the documented parameter ranges the cap is unreachable in practice.

use rand::Rng;

use crate::ars::{Ars, Distribution};
use crate::classify::{canonical_ars, CanonicalClass};
use crate::fields::{rank_two, LinearField};
use crate::group::AlgebraElement;
use crate::linalg2::{anticommutant_basis, commutant_basis, Mat2, ThetaFamily, ThetaForm, Vec2};
use crate::morphisms::{pullback, Automorphism};

const MAX_TRIES: usize = 400;

fn vec2(rng: &mut impl Rng, half_width: f64) -> Vec2 {
    Vec2::new(
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
    )
}

/// A theta form drawn across all families, with the zero-trace and
/// coalescing-eigenvalue special cases represented.
pub fn random_theta(rng: &mut impl Rng) -> ThetaForm {
    match rng.gen_range(0..6u8) {
        0 => ThetaForm::jordan(),
        1 => ThetaForm::diagonal(1.0).unwrap(),
        2 => ThetaForm::diagonal(-1.0).unwrap(),
        3 => ThetaForm::diagonal(rng.gen_range(-0.95..0.95)).unwrap(),
        4 => ThetaForm::rotation(0.0).unwrap(),
        _ => ThetaForm::rotation(rng.gen_range(-1.5..1.5)).unwrap(),
    }
}

/// A rank-two admissible field: A is a random combination of the commutant
/// basis of theta, so A theta = theta A holds exactly.
pub fn random_admissible_field(rng: &mut impl Rng, theta: ThetaForm) -> LinearField {
    let basis = commutant_basis(theta);
    for _ in 0..MAX_TRIES {
        let mut a = Mat2::zero();
        for b in &basis {
            a = a + *b * rng.gen_range(-1.5..1.5);
        }
        let xi = vec2(rng, 1.5);
        let x = LinearField::new(theta, xi, a).expect("commutant combination is admissible");
        if rank_two(&x) {
            return x;
        }
    }
    panic!("random_admissible_field: retries exhausted");
}

/// A random declared-orthonormal basis, kept away from the nilradical plane
/// (max |alpha| at least 0.2) so downstream normalization is well posed.
pub fn random_distribution(rng: &mut impl Rng) -> Distribution {
    for _ in 0..MAX_TRIES {
        let b1 = AlgebraElement::new(rng.gen_range(-1.5..1.5), vec2(rng, 1.5));
        let b2 = AlgebraElement::new(rng.gen_range(-1.5..1.5), vec2(rng, 1.5));
        if b1.alpha.abs().max(b2.alpha.abs()) < 0.2 {
            continue;
        }
        if let Ok(d) = Distribution::new(b1, b2) {
            return d;
        }
    }
    panic!("random_distribution: retries exhausted");
}

/// A random valid structure on G(theta): field and distribution redrawn
/// until the rank condition and locus-complement checks pass.
pub fn random_valid_ars(rng: &mut impl Rng, theta: ThetaForm) -> Ars {
    for _ in 0..MAX_TRIES {
        let x = random_admissible_field(rng, theta);
        let delta = random_distribution(rng);
        if let Ok(s) = Ars::new(x, delta) {
            return s;
        }
    }
    panic!("random_valid_ars: retries exhausted");
}

/// A random automorphism of G(theta): P is a well-conditioned combination
/// of the (anti)commutant basis, eta a random translation part. Time
/// reversal is drawn with probability 1/2 whenever the trace permits it.
pub fn random_automorphism(rng: &mut impl Rng, theta: ThetaForm) -> Automorphism {
    for _ in 0..MAX_TRIES {
        let eps = if theta.trace() == 0.0 && rng.gen_bool(0.5) {
            -1.0
        } else {
            1.0
        };
        let basis = if eps > 0.0 {
            commutant_basis(theta)
        } else {
            anticommutant_basis(theta)
        };
        let mut p = Mat2::zero();
        for b in &basis {
            p = p + *b * rng.gen_range(-1.5..1.5);
        }
        if p.det().abs() < 0.05 || p.norm_max() > 4.0 {
            continue;
        }
        let eta = vec2(rng, 1.0);
        return Automorphism::new(theta, eps, p, eta).expect("basis combination twist-commutes");
    }
    panic!("random_automorphism: retries exhausted");
}

/// The same structure through a rotated declared basis: the new pair spans
/// the same plane with the same inner product, so the metric object is
/// unchanged while every presentation-sensitive quantity may move.
pub fn random_orthogonal_representation(rng: &mut impl Rng, sigma: &Ars) -> Ars {
    let b1 = sigma.distribution().b1();
    let b2 = sigma.distribution().b2();
    for _ in 0..MAX_TRIES {
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let (s, c) = phi.sin_cos();
        let flip = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        let c1 = AlgebraElement::new(
            c * b1.alpha + s * b2.alpha,
            b1.eta * c + b2.eta * s,
        );
        let c2 = AlgebraElement::new(
            flip * (-s * b1.alpha + c * b2.alpha),
            (b1.eta * -s + b2.eta * c) * flip,
        );
        let delta = match Distribution::new(c1, c2) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if let Ok(out) = Ars::new(*sigma.field(), delta) {
            return out;
        }
    }
    panic!("random_orthogonal_representation: retries exhausted");
}

/// A random member of a canonical class: the canonical representative for
/// (cls, sigma) over a random admissible field, hidden behind `pullbacks`
/// random automorphism pullbacks. Classification must recover cls, sigma,
/// and a unit rescale factor from the result.
pub fn random_class_member(
    rng: &mut impl Rng,
    theta: ThetaForm,
    cls: CanonicalClass,
    sigma: f64,
    pullbacks: usize,
) -> Ars {
    'outer: for _ in 0..MAX_TRIES {
        let x = random_admissible_field(rng, theta);
        let mut s = match canonical_ars(cls, x, sigma) {
            Ok(s) => s,
            Err(_) => continue,
        };
        for _ in 0..pullbacks {
            let m = random_automorphism(rng, theta);
            s = match pullback(&s, &m) {
                Ok(next) => next,
                Err(_) => continue 'outer,
            };
        }
        return s;
    }
    panic!("random_class_member: retries exhausted");
}

/// Classes valid for the family, honoring the partition table.
pub fn classes_for(theta: ThetaForm) -> Vec<CanonicalClass> {
    crate::classify::class_partition(theta)
}

/// True when the family forces every random A to be a multiple of a single
/// generator pair; used by tests to budget retries.
pub fn commutant_dim(theta: ThetaForm) -> usize {
    match theta.family() {
        ThetaFamily::Diagonal if theta.gamma() == 1.0 => 4,
        _ => 2,
    }
}
