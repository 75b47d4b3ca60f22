use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jamsec_core::secrecy::eve::{capacity_eve_foxh, capacity_eve_quadrature, eve_sinr_cdf};
use jamsec_core::secrecy::receiver::{capacity_receiver_quadrature, capacity_receiver_series};
use jamsec_core::specfun::{gauss_2f1, meijer_g, MeijerGSpec};
use jamsec_core::{DoubleKappaMuShadowedParams, EveLinkParams, QuadratureConfig};

fn special_functions(c: &mut Criterion) {
    let quad = QuadratureConfig::default();
    let log1p = MeijerGSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0]).unwrap();
    c.bench_function("meijer_g ln(1+z)", |b| b.iter(|| meijer_g(&log1p, black_box(2.0), &quad)));
    let g33 = MeijerGSpec::new(3, 2, vec![-3.5, -2.0, -1.0], vec![0.0, -2.0, -2.0]).unwrap();
    c.bench_function("meijer_g 3,2,3,3", |b| b.iter(|| meijer_g(&g33, black_box(0.3), &quad)));
    c.bench_function("gauss_2f1", |b| b.iter(|| gauss_2f1(black_box(2.5), 3.0, 1.5, black_box(0.7))));
}

fn receiver(c: &mut Criterion) {
    let mut group = c.benchmark_group("receiver capacity");
    for kappa in [0.5, 3.0] {
        let p = DoubleKappaMuShadowedParams::new(2.0, 3.0, 1.5, kappa, 10.0).unwrap();
        group.bench_with_input(BenchmarkId::new("series", kappa), &p, |b, p| b.iter(|| capacity_receiver_series(p)));
        group.bench_with_input(BenchmarkId::new("quadrature", kappa), &p, |b, p| {
            b.iter(|| capacity_receiver_quadrature(p))
        });
    }
    group.finish();
}

fn eavesdropper(c: &mut Criterion) {
    let quad = QuadratureConfig::default();
    let mut group = c.benchmark_group("eavesdropper");
    group.sample_size(20);
    for (nu_i, nu_j) in [(1, 1), (2, 3), (4, 8)] {
        let p = EveLinkParams::new(nu_i, 0.1, nu_j, 0.5).unwrap();
        let id = format!("{nu_i}x{nu_j}");
        group.bench_with_input(BenchmarkId::new("cdf", &id), &p, |b, p| b.iter(|| eve_sinr_cdf(p, black_box(3.0))));
        group.bench_with_input(BenchmarkId::new("capacity fox-h", &id), &p, |b, p| b.iter(|| capacity_eve_foxh(p, &quad)));
        group.bench_with_input(BenchmarkId::new("capacity quadrature", &id), &p, |b, p| {
            b.iter(|| capacity_eve_quadrature(p))
        });
    }
    group.finish();
}

criterion_group!(benches, special_functions, receiver, eavesdropper);
criterion_main!(benches);
