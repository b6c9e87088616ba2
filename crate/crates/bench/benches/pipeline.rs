use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use toricdegen::{build_report, lift_partition, Partition};
use toricdegen_bench::{gamma, sigma_rays, simplex_dn};

fn construction(c: &mut Criterion) {
    let delta = simplex_dn(3);
    let rays = sigma_rays(3);
    c.bench_function("gamma3/partition", |b| {
        b.iter(|| Partition::from_fan_rays(black_box(delta.clone()), black_box(&rays)).unwrap())
    });
    c.bench_function("gamma3/classify", |b| {
        b.iter_batched(|| gamma(3), |g| g.classify().nonsingular, criterion::BatchSize::SmallInput)
    });
}

fn lifting(c: &mut Criterion) {
    let g = Arc::new(gamma(3));
    c.bench_function("gamma3/lift", |b| b.iter(|| lift_partition(Arc::clone(&g), 0, false).unwrap()));
    let (_, lifted) = lift_partition(Arc::clone(&g), 0, false).unwrap();
    c.bench_function("gamma3/degeneration_report", |b| b.iter(|| build_report(black_box(&lifted)).unwrap()));
}

fn lattice_points(c: &mut Criterion) {
    let d4 = simplex_dn(4);
    c.bench_function("delta4/lattice_points", |b| b.iter(|| black_box(&d4).lattice_points().unwrap().len()));
}

criterion_group!(benches, construction, lifting, lattice_points);
criterion_main!(benches);
