//! Sequential vs rayon execution for the two hot paths: building an example (exact
//! transforms and inner products per index) and quadrature Gram matrices.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use xmop_exact::qi;
use xmop_families::examples::{run, Params};
use xmop_families::Exec;
use xmop_verify::numeric_gram;

fn params() -> Params {
    [("a".to_string(), qi(2))].into_iter().collect()
}

fn example_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("example-1-build");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| run(1, &params(), black_box(10), exec).unwrap())
        });
    }
    g.finish();
}

fn gram(c: &mut Criterion) {
    let r = run(1, &params(), 10, Exec::Parallel).unwrap();
    let idx: Vec<usize> = r.result.polys.keys().copied().collect();
    let pairs: Vec<(usize, usize)> = idx.iter().flat_map(|&n| idx.iter().map(move |&m| (n, m))).collect();
    let mut g = c.benchmark_group("gram-200pt");
    g.sample_size(20);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| numeric_gram(&r.result.polys, &r.weight, 200, black_box(&pairs), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, example_build, gram);
criterion_main!(benches);
