//! Benchmarks for the exhaustive-search kernels.

use criterion::{criterion_group, criterion_main, Criterion};
use strata_core::fincat::{enumerate_functors, functor_category};
use strata_core::{fixtures, Caps};

fn bench_functor_search(c: &mut Criterion) {
    let caps = Caps::default();
    let iso3 = fixtures::indiscrete(3);
    let arrow = fixtures::walking_arrow();
    c.bench_function("enumerate_functors iso3 -> iso3", |b| {
        b.iter(|| enumerate_functors(&iso3, &iso3, &caps).unwrap().len())
    });
    c.bench_function("functor_category arrow^arrow", |b| {
        b.iter(|| functor_category(&arrow, &arrow, &caps).unwrap().cat.morphism_count())
    });
}

criterion_group!(benches, bench_functor_search);
criterion_main!(benches);
