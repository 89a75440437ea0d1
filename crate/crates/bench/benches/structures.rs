//! Structure-level benchmarks: AR norms, locus evaluation and extraction,
//! isometry verification, and the full classification pipeline.

use ars3d::ars::{ar_norm, locus_f, locus_slice};
use ars3d::classify::classify;
use ars3d::morphisms::{pullback, verify_isometry, GroupMap};
use ars3d::sample::{sample_tangent, SampleCfg};
use ars3d::gen;
use ars3d_bench::{fixture_points, fixture_structures, BENCH_SEED};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_ar_norm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED ^ 2);
    let (_, sigma) = &fixture_structures()[3];
    let pts = fixture_points(32);
    let tangents: Vec<_> = (0..32).map(|_| sample_tangent(&mut rng)).collect();
    c.bench_function("ar_norm_32", |b| {
        b.iter(|| {
            for (p, z) in pts.iter().zip(&tangents) {
                black_box(ar_norm(black_box(sigma), *p, *z));
            }
        });
    });
}

fn bench_locus(c: &mut Criterion) {
    let (_, sigma) = &fixture_structures()[0];
    let pts = fixture_points(64);
    c.bench_function("locus_f_64", |b| {
        b.iter(|| {
            for p in &pts {
                black_box(locus_f(black_box(sigma), *p));
            }
        });
    });
    let mut group = c.benchmark_group("locus_slice");
    group.sample_size(20);
    for res in [32usize, 128] {
        group.bench_with_input(BenchmarkId::from_parameter(res), &res, |b, &res| {
            b.iter(|| black_box(locus_slice(sigma, 0.0, (-2.0, 2.0, -2.0, 2.0), res)));
        });
    }
    group.finish();
}

fn bench_verify_isometry(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED ^ 3);
    let (theta, sigma) = fixture_structures().remove(3);
    let m = gen::random_automorphism(&mut rng, theta);
    let pulled = pullback(&sigma, &m).unwrap();
    let cfg = SampleCfg { samples: 250, ..Default::default() };
    let mut group = c.benchmark_group("verify_isometry");
    group.sample_size(20);
    group.bench_function("250_samples", |b| {
        b.iter(|| {
            black_box(
                verify_isometry(
                    &GroupMap::Automorphism(m),
                    &pulled,
                    &sigma,
                    &cfg,
                    1e-8,
                )
                .unwrap(),
            )
        });
    });
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let structures = fixture_structures();
    let mut group = c.benchmark_group("classify");
    group.sample_size(20);
    for (theta, sigma) in &structures {
        let name = format!("{:?}", theta.family()).to_lowercase();
        let id = if name == "jordan" {
            name
        } else {
            format!("{name}_{:+.1}", theta.gamma())
        };
        group.bench_with_input(BenchmarkId::from_parameter(id), sigma, |b, s| {
            b.iter(|| black_box(classify(black_box(s)).unwrap()));
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_ar_norm,
    bench_locus,
    bench_verify_isometry,
    bench_classify
);
criterion_main!(benches);
