use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use towerforge::scan::{scan_parallel, scan_sequential, ScanBounds};
use towerforge::sweep::{sweep_parallel, sweep_sequential};

fn scan_benchmark(c: &mut Criterion) {
    let mut group = c.benchmark_group("tower scan");
    group.sample_size(10);
    for max in [60i64, 120] {
        let bounds = ScanBounds::uniform(max);
        group.bench_with_input(
            BenchmarkId::new("sequential", max),
            &bounds,
            |b, &bounds| b.iter(|| black_box(scan_sequential(bounds))),
        );
        group.bench_with_input(BenchmarkId::new("parallel", max), &bounds, |b, &bounds| {
            b.iter(|| black_box(scan_parallel(bounds, 0)))
        });
    }
    group.finish();
}

fn sweep_benchmark(c: &mut Criterion) {
    let mut group = c.benchmark_group("discriminant sweep");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(sweep_sequential(-5000, 0)))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(sweep_parallel(-5000, 0)))
    });
    group.finish();
}

criterion_group!(benches, scan_benchmark, sweep_benchmark);
criterion_main!(benches);
