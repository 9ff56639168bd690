use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mertens_core::constants::{alpha_all, ConstantsTable};
use mertens_core::expansion::generate_sk;
use mertens_core::polylog::li_neg;
use mertens_core::primes::{omega_sieve, primes_in_range};
use mertens_core::zetaprime::prime_zeta;
use mertens_core::{HPReal, PowerSeries, DEFAULT_PREC};

fn sieves(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    g.sample_size(20);
    g.bench_function("primes 1e8..1e8+1e6", |b| {
        b.iter(|| primes_in_range(black_box(100_000_000), 101_000_000).len())
    });
    g.bench_function("omega 1e8..1e8+1e6", |b| {
        b.iter(|| omega_sieve(black_box(100_000_000), 101_000_000).omega.len())
    });
    g.finish();
}

fn constants(c: &mut Criterion) {
    let mut g = c.benchmark_group("constants");
    g.sample_size(10);
    g.bench_function("alpha_all j<=26", |b| b.iter(|| alpha_all(black_box(26), DEFAULT_PREC).unwrap()));
    let two = HPReal::from_u64(2, DEFAULT_PREC);
    g.bench_function("prime_zeta(2)", |b| b.iter(|| prime_zeta(black_box(&two)).unwrap()));
    g.finish();
}

fn expansions(c: &mut Criterion) {
    let table = ConstantsTable::build(40, 4, DEFAULT_PREC).unwrap();
    let mut g = c.benchmark_group("generate_sk");
    for k in 2..=4 {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| generate_sk(k, 8, &table).unwrap())
        });
    }
    g.finish();
}

fn series(c: &mut Criterion) {
    let a = PowerSeries::from_fn(40, |i| HPReal::from_ratio(1, i as i64 + 1, DEFAULT_PREC));
    let b = PowerSeries::from_fn(40, |i| HPReal::from_ratio(i as i64 + 2, 3, DEFAULT_PREC));
    c.bench_function("series mul order 40", |bch| bch.iter(|| a.mul(black_box(&b)).unwrap()));
    c.bench_function("series div order 40", |bch| bch.iter(|| a.div(black_box(&b)).unwrap()));
}

fn polylog(c: &mut Criterion) {
    let z = HPReal::from_ratio(1, 2, DEFAULT_PREC);
    let mut g = c.benchmark_group("li_neg");
    for k in [10u32, 100, 200] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| li_neg(k, black_box(&z)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sieves, constants, expansions, series, polylog);
criterion_main!(benches);
