use std::path::PathBuf;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use modhyp::criterion::{attempt_equation, CandidateSpace};
use modhyp::hypgeom::{apply_transform, count_points, is_isomorphic, ModelTransform};
use modhyp::newform::{ingest_fixture, label};
use modhyp::recover::{expand_model, recover_hyperelliptic, ExpansionPoint, HyperellipticModel};
use modhyp::sieve::enumerate_a2_cubics;
use modhyp::QPoly;

fn fixture_space(level: u64, names: &[&str]) -> CandidateSpace {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let forms = ingest_fixture(dir.join(format!("{level}.nfqx"))).unwrap();
    let labels = label(&forms).unwrap();
    let idx: Vec<usize> = names.iter().map(|n| labels.iter().position(|l| l == n).unwrap()).collect();
    CandidateSpace::new(idx.iter().map(|&i| forms[i].clone()).collect(), idx.iter().map(|&i| labels[i].clone()).collect())
        .unwrap()
}

fn bench_recover(c: &mut Criterion) {
    let mut group = c.benchmark_group("recover");
    for g in [2usize, 3, 4, 6] {
        let mut coeffs: Vec<i64> = (0..=2 * g as i64 + 1).map(|i| (i * 7 % 11) - 5).collect();
        *coeffs.last_mut().unwrap() = 1;
        let m = HyperellipticModel::new(QPoly::from_i64(&coeffs)).unwrap();
        let b = expand_model(&m, &ExpansionPoint::Infinity, 4 * g as i64 + 5).unwrap();
        group.bench_with_input(BenchmarkId::new("weierstrass", g), &b, |bch, b| {
            bch.iter(|| recover_hyperelliptic(black_box(b)).unwrap())
        });
    }
    group.finish();
}

fn bench_points(c: &mut Criterion) {
    let f = QPoly::from_i64(&[-16, 36, 53, -56, -120, -66, -8, 4, 1]);
    let mut group = c.benchmark_group("count_points");
    for q in [7u64, 27, 49, 101] {
        group.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| b.iter(|| count_points(black_box(&f), 3, q)));
    }
    group.finish();
}

fn bench_isomorphism(c: &mut Criterion) {
    let f = QPoly::from_i64(&[1, -1, 0, 2, 0, 1]);
    let t = ModelTransform::from_i64([2, 1, 1, 1], 1).unwrap();
    let g = apply_transform(&f, 2, &t).unwrap();
    c.bench_function("is_isomorphic/genus2_height3", |b| b.iter(|| is_isomorphic(black_box(&f), black_box(&g), 2, 3)));
}

fn bench_criterion(c: &mut Criterion) {
    let s39 = fixture_space(39, &["39A", "39B"]);
    c.bench_function("attempt_equation/39AB", |b| b.iter(|| attempt_equation(black_box(&s39)).unwrap()));
    let s21 = fixture_space(21, &["21A", "21A_{0,2}"]);
    c.bench_function("attempt_equation/21A_chi", |b| b.iter(|| attempt_equation(black_box(&s21)).unwrap()));
}

fn bench_sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve");
    group.sample_size(10);
    group.bench_function("a2_cubics", |b| b.iter(enumerate_a2_cubics));
    group.finish();
}

criterion_group!(benches, bench_recover, bench_points, bench_isomorphism, bench_criterion, bench_sieve);
criterion_main!(benches);
