//! Norm and locus properties at scale, with independent min-norm and
//! formula oracles.

use ars3d::ars::{ar_norm, crossings, frame_at, locus_f, locus_slice, Crossings, CurveKind};
use ars3d::fields::{eval_linear, LinearField};
use ars3d::gen::{random_theta, random_valid_ars};
use ars3d::sample::{sample_point, sample_tangent};
use ars3d::{AlgebraElement, Ars, Distribution, GroupPoint, Mat2, Tangent, ThetaForm, Vec2};
use ars3d_oracles::{min_norm_gauss, min_norm_probe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn frame_rows(sigma: &Ars, p: GroupPoint) -> [[f64; 3]; 3] {
    let (f0, f1, f2) = frame_at(sigma, p);
    [
        [f0.dt, f1.dt, f2.dt],
        [f0.dv.x, f1.dv.x, f2.dv.x],
        [f0.dv.y, f1.dv.y, f2.dv.y],
    ]
}

#[test]
fn ar_norm_is_absolutely_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let mut checked = 0;
    while checked < 1000 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        for _ in 0..20 {
            let p = sample_point(&mut rng, 2.0, 2.0);
            let z = sample_tangent(&mut rng);
            let n1 = ar_norm(&s, p, z);
            if !n1.is_finite() {
                continue;
            }
            let c: f64 = rng.gen_range(-3.0..3.0);
            let cz = Tangent::new(c * z.dt, z.dv * c);
            let n2 = ar_norm(&s, p, cz);
            assert!(
                (n2 - c.abs() * n1).abs() <= 1e-10 * (1.0 + n1.abs() * c.abs()),
                "homogeneity failed at {p:?}, c={c}"
            );
            checked += 1;
        }
    }
}

#[test]
fn frame_vectors_have_unit_norm_off_the_locus() {
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    let mut checked = 0;
    while checked < 500 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        for _ in 0..20 {
            let p = sample_point(&mut rng, 2.0, 2.0);
            if locus_f(&s, p).abs() <= 1e-6 {
                continue;
            }
            let (_, y1, y2) = frame_at(&s, p);
            assert!((ar_norm(&s, p, y1) - 1.0).abs() < 1e-9);
            assert!((ar_norm(&s, p, y2) - 1.0).abs() < 1e-9);
            checked += 1;
        }
    }
}

#[test]
fn ar_norm_agrees_with_the_elimination_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(405);
    let mut instances = 0;
    while instances < 100 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        let p = sample_point(&mut rng, 2.0, 2.0);
        let z = sample_tangent(&mut rng);
        let got = ar_norm(&s, p, z);
        let m = frame_rows(&s, p);
        let oracle = min_norm_gauss(m, [z.dt, z.dv.x, z.dv.y], 1e-11);
        match oracle {
            None => assert!(
                got.is_infinite(),
                "oracle says unreachable but ar_norm is {got}"
            ),
            Some(alpha) => {
                let onorm =
                    (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt();
                assert!(got <= onorm + 1e-8, "min-norm {got} beats oracle {onorm}?");
                assert!(got >= onorm - 1e-3, "oracle {onorm} beats min-norm {got}");
                if instances < 10 {
                    // second opinion: random probing never undercuts either
                    let probe = min_norm_probe(m, [z.dt, z.dv.x, z.dv.y], alpha, 100_000);
                    assert!(got <= probe + 1e-8);
                }
            }
        }
        instances += 1;
    }
}

#[test]
fn locus_zero_set_is_exactly_the_frame_rank_drop() {
    let mut rng = ChaCha8Rng::seed_from_u64(407);
    let mut seen_locus = 0;
    for _ in 0..20 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        for _ in 0..500 {
            let p = sample_point(&mut rng, 2.0, 2.0);
            let f = locus_f(&s, p);
            let rows = frame_rows(&s, p);
            let m = ars3d::Mat3::new(rows);
            let svd = ars3d::linalg2::svd3(m);
            let deficient = svd.s[2] <= 1e-9 * (1.0 + svd.s[0]);
            // avoid classifying points in the indeterminate band
            let scale = 1.0 + p.t.abs() + p.v.norm();
            if f.abs() > 1e-6 * scale {
                assert!(!deficient, "frame degenerate off the locus at {p:?}");
            }
        }
        // constructed on-locus points must be rank-deficient
        let pts = ars3d::morphisms::locus_points(&s, &ars3d::sample::SampleCfg::default(), 16);
        for p in pts {
            let rows = frame_rows(&s, p);
            let svd = ars3d::linalg2::svd3(ars3d::Mat3::new(rows));
            assert!(svd.s[2] <= 1e-6 * (1.0 + svd.s[0]), "on-locus frame has full rank at {p:?}");
            seen_locus += 1;
        }
    }
    assert!(seen_locus > 100);
}

#[test]
fn field_zeros_lie_on_the_locus() {
    let mut rng = ChaCha8Rng::seed_from_u64(409);
    let mut checked = 0;
    while checked < 200 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        let Some(ainv) = s.field().a().inverse() else { continue };
        let t: f64 = rng.gen_range(-1.5..1.5);
        let lam = ars3d::linalg2::lambda_op(ars3d::linalg2::theta_matrix(theta), t);
        let v = ainv * (lam * s.field().xi()) * -1.0;
        let p = GroupPoint::new(t, v);
        if eval_linear(s.field(), p).norm() > 1e-12 * (1.0 + v.norm()) {
            continue;
        }
        assert!(
            locus_f(&s, p).abs() < 1e-10 * (1.0 + v.norm()),
            "zero of X off the locus at {p:?}"
        );
        checked += 1;
    }
}

#[test]
fn locus_formula_matches_the_frame_determinant() {
    // F was assembled as det[Av + Lambda xi | rho eta*]; the 3x3 frame
    // determinant must reproduce it up to the constant |eta_raw|
    let mut rng = ChaCha8Rng::seed_from_u64(411);
    for _ in 0..10 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        let b1 = s.distribution().b1();
        let b2 = s.distribution().b2();
        let raw = b1.eta * b2.alpha - b2.eta * b1.alpha;
        let c = raw.norm();
        for _ in 0..100 {
            let p = sample_point(&mut rng, 2.0, 2.0);
            let rows = frame_rows(&s, p);
            let det3 = det3x3(rows);
            let f = locus_f(&s, p);
            assert!(
                (det3.abs() - c * f.abs()).abs() <= 1e-9 * (1.0 + det3.abs()),
                "determinant factorization failed at {p:?}"
            );
        }
    }
}

fn det3x3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[test]
fn rotation_field_locus_has_the_closed_form() {
    // theta = Diagonal(1), A = rotation generator, xi = 0, nilradical line
    // e1: F(t, v) = -e^t v1 exactly
    let theta = ThetaForm::diagonal(1.0).unwrap();
    let x = LinearField::new(theta, Vec2::zero(), Mat2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
    let delta = Distribution::new(
        AlgebraElement::new(1.0, Vec2::zero()),
        AlgebraElement::new(0.5, Vec2::new(1.0, 0.0)),
    )
    .unwrap();
    let s = Ars::new(x, delta).unwrap();
    assert!((s.eta_star() - Vec2::new(1.0, 0.0)).norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(413);
    for _ in 0..1000 {
        let p = sample_point(&mut rng, 2.0, 2.0);
        let want = -p.t.exp() * p.v.x;
        assert!((locus_f(&s, p) - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}

#[test]
fn crossings_scan_is_discrete_or_contained() {
    let mut rng = ChaCha8Rng::seed_from_u64(415);
    let mut verified_roots = 0;
    for _ in 0..40 {
        let theta = random_theta(&mut rng);
        let s = random_valid_ars(&mut rng, theta);
        for _ in 0..10 {
            let p0 = sample_point(&mut rng, 1.5, 1.5);
            let curve = if rng.gen_bool(0.5) {
                CurveKind::Exponential(AlgebraElement::new(
                    rng.gen_range(-1.0..1.0),
                    Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                ))
            } else {
                CurveKind::LinearFlow
            };
            let out = crossings(&s, curve, p0, (-2.0, 2.0), 32)
                .expect("more than 32 roots on a bounded interval");
            if let Crossings::Roots(roots) = out {
                for w in roots.windows(2) {
                    assert!(w[1] > w[0], "roots not ascending");
                }
                for r in roots {
                    let q = match curve {
                        CurveKind::Exponential(gen) => ars3d::group::mul(
                            theta,
                            p0,
                            ars3d::group::exp_g(theta, AlgebraElement::new(r * gen.alpha, gen.eta * r)),
                        ),
                        CurveKind::LinearFlow => ars3d::fields::flow(s.field(), r, p0),
                    };
                    let scale = 1.0 + q.t.abs() + q.v.norm();
                    assert!(
                        locus_f(&s, q).abs() < 1e-7 * scale,
                        "reported root misses the locus"
                    );
                    verified_roots += 1;
                }
            }
        }
    }
    assert!(verified_roots > 50, "scan never found crossings to verify");
}

#[test]
fn slice_points_track_the_implicit_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(417);
    let theta = ThetaForm::jordan();
    let s = random_valid_ars(&mut rng, theta);
    let window = (-2.0, 2.0, -2.0, 2.0);
    let res = 64;
    let cell = 4.0 / (res - 1) as f64;
    let polylines = locus_slice(&s, 0.3, window, res);
    let mut points = 0;
    for line in &polylines {
        assert!(line.len() >= 2);
        for v in line {
            // Lipschitz bound on a cell: |F| can move at most one cell of
            // gradient; estimate the local gradient by differences
            let p = GroupPoint::new(0.3, *v);
            let f = locus_f(&s, p);
            let gx = (locus_f(&s, GroupPoint::new(0.3, *v + Vec2::new(cell, 0.0))) - f).abs();
            let gy = (locus_f(&s, GroupPoint::new(0.3, *v + Vec2::new(0.0, cell))) - f).abs();
            assert!(f.abs() <= 2.0 * (gx + gy) + 1e-9, "slice point far from the curve");
            points += 1;
        }
    }
    // the locus is nonempty through this window or the slice is empty;
    // either way the call returns, and any reported geometry was checked
    let _ = points;
}

#[test]
fn zero_field_structures_are_rejected_for_empty_complement() {
    let theta = ThetaForm::diagonal(0.3).unwrap();
    let x = LinearField::new(theta, Vec2::zero(), Mat2::zero()).unwrap();
    // (0, e1+e2) is not a theta eigendirection, so the bracket alone spans
    // the algebra and the rank condition cannot be the failure
    let delta = Distribution::new(
        AlgebraElement::new(1.0, Vec2::zero()),
        AlgebraElement::new(0.0, Vec2::new(1.0, 1.0)),
    )
    .unwrap();
    match Ars::new(x, delta) {
        Err(ars3d::Error::EmptyComplement) => {}
        other => panic!("expected EmptyComplement, got {other:?}"),
    }
}
