use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quiverdim_core::constructions::{thm47_certificate, CertifyOptions};
use quiverdim_core::homology::simple_pds;
use quiverdim_core::random::default_samples;
use quiverdim_core::rep::IsoOptions;
use quiverdim_core::torsion::algebra_layer_length;

fn invariants(c: &mut Criterion) {
    let (ex1, v1) = quiverdim_bench::example1();
    let (ex2, v2) = quiverdim_bench::example2();

    c.bench_function("simple_pds/example1", |b| {
        b.iter(|| simple_pds(black_box(&ex1), 40).unwrap())
    });
    c.bench_function("simple_pds/example2", |b| {
        b.iter(|| simple_pds(black_box(&ex2), 40).unwrap())
    });
    c.bench_function("layer_length/example1", |b| {
        b.iter(|| algebra_layer_length(black_box(&ex1), &v1))
    });
    c.bench_function("layer_length/example2", |b| {
        b.iter(|| algebra_layer_length(black_box(&ex2), &v2))
    });

    let samples = default_samples(&ex1, 20, 0);
    let opts = CertifyOptions {
        cutoff: 40,
        iso: IsoOptions::default(),
    };
    let mut group = c.benchmark_group("certificate");
    group.sample_size(10);
    group.bench_function("example1", |b| {
        b.iter(|| thm47_certificate(black_box(&ex1), &v1, &samples, opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, invariants);
criterion_main!(benches);
