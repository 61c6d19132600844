//! Sequential vs rayon execution of the three data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyzeros::curvetrace::{dominance_map, trace_curve, BBox, DominanceOptions, Grid};
use polyzeros::examples::example;
use polyzeros::par::Exec;
use polyzeros::recurrence::sequence_generate;
use polyzeros::rootfind::{find_roots_batch, RootOptions};
use std::hint::black_box;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn roots(c: &mut Criterion) {
    let spec = example("5.2").unwrap().spec();
    let polys = sequence_generate(&spec, 120).polys[1..].to_vec();
    let mut g = c.benchmark_group("find_roots_batch");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = RootOptions { exec, ..RootOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| find_roots_batch(black_box(&polys), o))
        });
    }
    g.finish();
}

fn tracing(c: &mut Criterion) {
    let spec = example("5.1").unwrap().spec();
    let grid = Grid::new(BBox::square(6.0).unwrap(), 300, 300).unwrap();
    let mut g = c.benchmark_group("trace_curve");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| trace_curve(black_box(&spec), &grid, 1e-12, e).unwrap())
        });
    }
    g.finish();
}

fn dominance(c: &mut Criterion) {
    let spec = example("5.1").unwrap().spec();
    let grid = Grid::new(BBox::square(6.0).unwrap(), 120, 120).unwrap();
    let mut g = c.benchmark_group("dominance_map");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = DominanceOptions { exec, ..DominanceOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| dominance_map(black_box(&spec), &grid, o).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, roots, tracing, dominance);
criterion_main!(benches);
