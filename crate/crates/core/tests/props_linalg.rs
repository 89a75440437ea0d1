//! Randomized laws and oracle cross-checks for the 2x2 analytic kernels.

use ars3d::linalg2::{
    commutant_basis, commutes, expm2, lambda_op, theta_matrix, ThetaForm,
};
use ars3d::Mat2;
use ars3d_oracles::{expm2_ss, lambda_quad};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mat(rng: &mut impl Rng, half_width: f64) -> Mat2 {
    Mat2::new(
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
    )
}

fn as_rows(a: Mat2) -> [[f64; 2]; 2] {
    a.m
}

fn from_rows(r: [[f64; 2]; 2]) -> Mat2 {
    Mat2::new(r[0][0], r[0][1], r[1][0], r[1][1])
}

#[test]
fn expm2_is_a_one_parameter_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let a = random_mat(&mut rng, 2.0);
        let s: f64 = rng.gen_range(-2.0..2.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let lhs = expm2(a, s + t);
        let rhs = expm2(a, s) * expm2(a, t);
        let scale = 1.0 + lhs.norm_max().max(rhs.norm_max());
        assert!(
            (lhs - rhs).norm_max() <= 1e-10 * scale,
            "group law violated for {a:?} at s={s}, t={t}"
        );
    }
}

#[test]
fn expm2_matches_scaling_and_squaring() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..1000 {
        let a = random_mat(&mut rng, 2.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let got = expm2(a, t);
        let want = from_rows(expm2_ss(as_rows(a), t));
        assert!(
            (got - want).norm_max() <= 1e-11 * (1.0 + want.norm_max()),
            "expm2 disagrees with oracle for {a:?}, t={t}"
        );
    }
}

#[test]
fn expm2_near_coalescent_eigenvalues_stays_accurate() {
    // walk the discriminant through zero: A = [[1, 1],[d, 1]] has
    // eigenvalue gap 2*sqrt(d) around d = 0, crossing the series branch
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for k in 0..200 {
        let d = -1e-6 + 1e-8 * k as f64;
        let a = Mat2::new(1.0, 1.0, d, 1.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let got = expm2(a, t);
        let want = from_rows(expm2_ss(as_rows(a), t));
        assert!((got - want).norm_max() <= 1e-11 * (1.0 + want.norm_max()));
    }
}

#[test]
fn lambda_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..300 {
        let a = random_mat(&mut rng, 2.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let l = lambda_op(a, t);
        for eta in [[1.0, 0.0], [0.0, 1.0], [0.7, -0.4]] {
            let want = lambda_quad(as_rows(a), t, eta);
            let got = l * ars3d::Vec2::new(eta[0], eta[1]);
            let err = (got.x - want[0]).abs().max((got.y - want[1]).abs());
            assert!(
                err <= 1e-10 * (1.0 + want[0].abs().max(want[1].abs())),
                "lambda_op disagrees with quadrature for {a:?}, t={t}, eta={eta:?}"
            );
        }
    }
}

#[test]
fn lambda_times_a_recovers_the_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..1000 {
        let a = random_mat(&mut rng, 2.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let e = expm2(a, t) - Mat2::identity();
        let l = lambda_op(a, t);
        let scale = 1.0 + e.norm_max();
        assert!((l * a - e).norm_max() <= 1e-10 * scale);
        assert!((a * l - e).norm_max() <= 1e-10 * scale);
    }
}

#[test]
fn lambda_cocycle() {
    // Λ_{t+s} = Λ_t + ρ_t Λ_s for the flow matrices ρ of any generator
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for _ in 0..1000 {
        let a = random_mat(&mut rng, 2.0);
        let s: f64 = rng.gen_range(-2.0..2.0);
        let t: f64 = rng.gen_range(-2.0..2.0);
        let lhs = lambda_op(a, t + s);
        let rhs = lambda_op(a, t) + expm2(a, t) * lambda_op(a, s);
        assert!((lhs - rhs).norm_max() <= 1e-10 * (1.0 + lhs.norm_max()));
    }
}

#[test]
fn commutant_members_commute_exactly() {
    let thetas = [
        ThetaForm::jordan(),
        ThetaForm::diagonal(1.0).unwrap(),
        ThetaForm::diagonal(-1.0).unwrap(),
        ThetaForm::diagonal(0.3).unwrap(),
        ThetaForm::rotation(0.0).unwrap(),
        ThetaForm::rotation(2.0).unwrap(),
    ];
    for theta in thetas {
        let th = theta_matrix(theta);
        for b in commutant_basis(theta) {
            assert!(commutes(b, th, 1e-12), "basis member {b:?} for {theta:?}");
            assert_eq!((b * th - th * b).norm_max(), 0.0);
        }
    }
}
