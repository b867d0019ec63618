use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mapls_core::{generate, parse_instance_name, solve_ap2, Constructor, Instance, LocalSearch, SplitMix64, SquareMatrix};
use std::hint::black_box;

fn instance(name: &str) -> Instance {
    generate(&parse_instance_name(name).unwrap()).unwrap()
}

fn ap2(c: &mut Criterion) {
    let mut group = c.benchmark_group("ap2");
    for n in [50, 150, 400] {
        let mut rng = SplitMix64::new(n as u64);
        let entries = (0..n * n).map(|_| rng.range_inclusive(1, 1000) as f64).collect();
        let m = SquareMatrix::new(n, entries).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| solve_ap2(black_box(m))));
    }
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    group.sample_size(10);
    for name in ["3r150", "5r40"] {
        let inst = instance(name);
        for h in Constructor::ALL {
            group.bench_function(format!("{name}/{h}"), |b| b.iter(|| h.build(black_box(&inst))));
        }
    }
    group.finish();
}

fn local_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("local_search");
    group.sample_size(10);
    for name in ["3r150", "5r40", "4c50"] {
        let inst = instance(name);
        let start = Constructor::Greedy.build(&inst);
        for ls in ["sdv", "2opt", "3opt", "vopt", "sdv+vopt"] {
            let search: LocalSearch = ls.parse().unwrap();
            group.bench_function(format!("{name}/{ls}"), |b| {
                b.iter(|| search.run(black_box(&inst), black_box(&start)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, ap2, construction, local_search);
criterion_main!(benches);
