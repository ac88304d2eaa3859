use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rforge_core::generate::{random_labelcover, random_setcover, GenParams};
use rforge_core::seed::SeedStream;
use rforge_core::solve::{materialized, solve_cost_setcover, solve_minlab, DEFAULT_CAP};

fn minlab(c: &mut Criterion) {
    let mut group = c.benchmark_group("minlab");
    for vertices in [3, 4, 5] {
        let params = GenParams { vertices, ..GenParams::default() };
        let mut rng = SeedStream::new(1).rng("bench-minlab");
        let (g, fs, fg) = random_labelcover(&params, &mut rng).expect("instance");
        group.bench_with_input(BenchmarkId::new("threshold", vertices), &vertices, |b, _| {
            b.iter(|| solve_minlab(&g, &fs, &fg, DEFAULT_CAP).expect("solve"))
        });
        if vertices <= 4 {
            group.bench_with_input(BenchmarkId::new("materialized", vertices), &vertices, |b, _| {
                b.iter(|| materialized::minlab(&g, &fs, &fg).expect("solve"))
            });
        }
    }
    group.finish();
}

fn setcover_cost(c: &mut Criterion) {
    let mut group = c.benchmark_group("setcover_cost");
    for items in [6, 9, 12] {
        let params = GenParams { vertices: 6, items, ..GenParams::default() };
        let mut rng = SeedStream::new(2).rng("bench-setcover");
        let (f, cs, cg) = random_setcover(&params, &mut rng).expect("instance");
        group.bench_with_input(BenchmarkId::from_parameter(items), &items, |b, _| {
            b.iter(|| solve_cost_setcover(&f, &cs, &cg, DEFAULT_CAP).expect("solve"))
        });
    }
    group.finish();
}

criterion_group!(benches, minlab, setcover_cost);
criterion_main!(benches);
