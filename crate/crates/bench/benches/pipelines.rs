use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use k3fix::elliptic::verify_all;
use k3fix::lefschetz::{enumerate_type_counts, TypeCountConstraints};
use k3fix::{Classifier, DataStore};

fn classify(c: &mut Criterion) {
    let data = DataStore::embedded().unwrap();
    let mut g = c.benchmark_group("classify_purely");
    g.sample_size(10);
    for n in [14u32, 21, 28, 42] {
        g.bench_function(n.to_string(), |b| {
            b.iter(|| Classifier::new(data.clone()).classify_purely(black_box(n)).unwrap())
        });
    }
    g.finish();
    let mut g = c.benchmark_group("classify_not_purely");
    g.sample_size(10);
    for (n, k) in [(14u32, 2u32), (21, 3), (42, 14)] {
        g.bench_function(format!("{n}_{k}"), |b| {
            b.iter(|| {
                Classifier::new(data.clone())
                    .classify_not_purely(black_box(n), k)
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn type_counts(c: &mut Criterion) {
    for n in [7u32, 14] {
        c.bench_function(&format!("type_counts_{n}"), |b| {
            b.iter(|| enumerate_type_counts(black_box(n), &TypeCountConstraints::euler_box(n, 1)).unwrap())
        });
    }
}

fn elliptic(c: &mut Criterion) {
    let data = DataStore::embedded().unwrap();
    let mut g = c.benchmark_group("elliptic");
    g.sample_size(10);
    g.bench_function("verify_all", |b| b.iter(|| verify_all(&data, black_box(0)).unwrap()));
    g.finish();
}

criterion_group!(benches, classify, type_counts, elliptic);
criterion_main!(benches);
