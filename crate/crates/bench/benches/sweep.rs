use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nagao_bench::engine;
use nagao_core::estimator::{nagao_series, FitBasis, DEFAULT_S_GRID};
use nagao_core::fibercount;

fn fiber_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("fiber_sweep");
    g.sample_size(10);
    for name in ["x3_plus_t", "legendre", "hyper_g2"] {
        let e = engine(name);
        for p in [251u64, 1009, 4001] {
            let red = e.reduce(p).expect("good prime");
            g.bench_with_input(BenchmarkId::new(name, p), &red, |b, red| {
                b.iter(|| fibercount::sweep(black_box(red)).expect("sweep"))
            });
        }
    }
    g.finish();
}

fn record_and_estimate(c: &mut Criterion) {
    let e = engine("x3_x_t2");
    c.bench_function("records_up_to_500", |b| {
        b.iter(|| e.records_up_to(black_box(500), 1).expect("records"))
    });
    let recs = e.records_up_to(2000, 1).expect("records");
    let good = e.good_primes_up_to(2000);
    c.bench_function("nagao_series_2000", |b| {
        b.iter(|| {
            nagao_series(
                black_box(&recs),
                &good,
                &[500, 1000, 2000],
                &DEFAULT_S_GRID,
                FitBasis::ReferencePrimeSum,
            )
            .expect("series")
        })
    });
}

criterion_group!(benches, fiber_sweep, record_and_estimate);
criterion_main!(benches);
