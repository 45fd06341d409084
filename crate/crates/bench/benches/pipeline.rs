use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kanon_bench::{ba, degree_sequence, demand};
use kanon_core::dp::DpTable;
use kanon_core::generator::barabasi_albert;
use kanon_core::realizability::{advanced_erdos_gallai_test, erdos_gallai_test};
use kanon_core::realize::local_exchange;
use kanon_core::reduction::apply_reduction_rule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp_min_cost");
    let g = ba(10_000, 3);
    let b = g.block_sequence();
    for k in [2usize, 5, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |bench, &k| {
            bench.iter(|| DpTable::classic(black_box(&b), k).min_cost(u64::MAX / 2))
        });
    }
    group.bench_function("reduction_k5", |bench| bench.iter(|| apply_reduction_rule(black_box(&b), 5)));
    group.finish();
}

fn eg(c: &mut Criterion) {
    let mut group = c.benchmark_group("erdos_gallai");
    for n in [1_000usize, 100_000] {
        let d = degree_sequence(n, 1);
        group.bench_with_input(BenchmarkId::new("plain", n), &d, |bench, d| bench.iter(|| erdos_gallai_test(black_box(d))));
    }
    let g = ba(10_000, 3);
    let b = g.block_sequence();
    let mut table = DpTable::classic(&b, 5);
    let s = table.min_cost(u64::MAX / 2).unwrap();
    let sol = table.solutions(s, 1).unwrap().next().unwrap();
    group.bench_function("advanced_ba10000_k5", |bench| bench.iter(|| advanced_erdos_gallai_test(&g, black_box(&sol))));
    group.finish();
}

fn exchange(c: &mut Criterion) {
    let g = ba(2_000, 3);
    let d = demand(&g, 7);
    c.bench_function("local_exchange_ba2000", |bench| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        bench.iter(|| local_exchange(&g, black_box(&d), &mut rng))
    });
}

fn generator(c: &mut Criterion) {
    c.bench_function("barabasi_albert_10000_m3", |bench| bench.iter(|| barabasi_albert(10_000, 3, black_box(1))));
}

criterion_group!(benches, dp, eg, exchange, generator);
criterion_main!(benches);
