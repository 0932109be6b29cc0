//! Sequential vs rayon timings for the three sweep kernels on seeded
//! random graphs. Both paths produce identical bytes; this suite exists to
//! show what the `parallel` feature actually buys.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hopdist::bounds::p_census;
use hopdist::nf::{exact_nf, hll_nf};
use hopdist::{Graph, HllParams, Parallelism};

/// Random graph with the given mean degree, fixed seed per size.
fn random_graph(n: u32, mean_degree: f64, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = mean_degree / (n as f64 - 1.0);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Graph::from_edges(n as usize, arcs, false)
}

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn bench_exact_nf(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_nf");
    group.sample_size(10);
    for n in [500u32, 2000] {
        let g = random_graph(n, 8.0, 42);
        for (label, par) in MODES {
            group.bench_with_input(BenchmarkId::new(label, n), &g, |b, g| {
                b.iter(|| exact_nf(black_box(g), None, par));
            });
        }
    }
    group.finish();
}

fn bench_hll_nf(c: &mut Criterion) {
    let mut group = c.benchmark_group("hll_nf");
    group.sample_size(10);
    let params = HllParams::default();
    for n in [500u32, 2000] {
        let g = random_graph(n, 8.0, 42);
        for (label, par) in MODES {
            group.bench_with_input(BenchmarkId::new(label, n), &g, |b, g| {
                b.iter(|| hll_nf(black_box(g), &params, par).unwrap());
            });
        }
    }
    group.finish();
}

fn bench_p_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("p_census");
    group.sample_size(10);
    for n in [500u32, 2000] {
        let g = random_graph(n, 8.0, 42);
        for (label, par) in MODES {
            group.bench_with_input(BenchmarkId::new(label, n), &g, |b, g| {
                b.iter(|| p_census(black_box(g), None, false, par).unwrap());
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_exact_nf, bench_hll_nf, bench_p_census);
criterion_main!(benches);
