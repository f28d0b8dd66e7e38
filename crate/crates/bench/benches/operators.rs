use criterion::{criterion_group, criterion_main, Criterion};
use paracalc_core::sampling::Sampler;
use paracalc_core::{box4, div4, run_suite, DiffMode, Field, Suite, SuiteConfig};
use std::hint::black_box;

fn algebra(c: &mut Criterion) {
    let mut s = Sampler::new(1);
    let (a, b) = (s.paravector(2.0), s.paravector(2.0));
    c.bench_function("paravector_mul", |bench| {
        bench.iter(|| black_box(a) * black_box(b))
    });
    c.bench_function("paravector_inverse", |bench| {
        bench.iter(|| black_box(a).inverse())
    });
}

fn operators(c: &mut Criterion) {
    let mut s = Sampler::new(2);
    let f = Field::Polynomial(s.polynomial(3, 2.0));
    let x = s.event(1.0, 0.5);
    c.bench_function("field_eval", |bench| {
        bench.iter(|| black_box(&f).eval(black_box(x)))
    });
    c.bench_function("div4_exact", |bench| {
        bench.iter(|| div4(black_box(&f), x, DiffMode::Exact))
    });
    c.bench_function("div4_numeric", |bench| {
        bench.iter(|| div4(black_box(&f), x, DiffMode::numeric(1e-5)))
    });
    c.bench_function("box4_exact", |bench| {
        bench.iter(|| box4(black_box(&f), x, DiffMode::Exact))
    });
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for suite in Suite::EACH {
        let cfg = SuiteConfig::for_suite(suite);
        group.bench_function(suite.name(), |bench| {
            bench.iter(|| run_suite(black_box(&cfg)))
        });
    }
    group.finish();
}

criterion_group!(benches, algebra, operators, suites);
criterion_main!(benches);
