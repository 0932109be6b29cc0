//! Brute-force oracles for the integration suites, written against the
//! definitions instead of the library pipeline: distances come from a
//! literal queue BFS over the public adjacency, metrics from enumerating
//! the n^2 ordered-pair distance multiset, reachability from a bitset
//! closure.

#![allow(dead_code)]

use std::collections::VecDeque;

use hopdist::{Graph, MetricsReport, Node};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bfs_distances(g: &Graph, src: Node) -> Vec<Option<u32>> {
    let n = g.num_nodes();
    let mut dist: Vec<Option<u32>> = vec![None; n];
    dist[src as usize] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].expect("queued nodes have distances");
        for &v in g.neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn distance_matrix(g: &Graph) -> Vec<Vec<Option<u32>>> {
    (0..g.num_nodes())
        .map(|u| bfs_distances(g, u as Node))
        .collect()
}

/// Metrics computed straight off the distance multiset.
pub struct EnumMetrics {
    pub avg: f64,
    pub confidence: f64,
    pub harmonic: f64,
    pub median: f64,
    pub coverage: f64,
    pub reachable_pairs: f64,
}

pub fn metrics_by_enumeration(dm: &[Vec<Option<u32>>]) -> EnumMetrics {
    let n = dm.len();
    assert!(n > 0, "enumeration oracle needs nodes");
    let n2 = (n * n) as f64;

    let mut all: Vec<u64> = Vec::with_capacity(n * n);
    for row in dm {
        for d in row {
            all.push(d.map_or(u64::MAX, |x| x as u64));
        }
    }
    let mut dist_sum = 0u64;
    let mut reachable = 0u64;
    for &d in &all {
        if d != u64::MAX {
            dist_sum += d;
            reachable += 1;
        }
    }
    let r = reachable as f64;

    let mut recip = 0.0f64;
    for (u, row) in dm.iter().enumerate() {
        for (v, d) in row.iter().enumerate() {
            if u != v {
                if let Some(d) = d {
                    recip += 1.0 / *d as f64;
                }
            }
        }
    }
    let harmonic = if recip == 0.0 {
        f64::INFINITY
    } else {
        n as f64 * (n as f64 - 1.0) / recip
    };

    all.sort_unstable();
    let mid = all[n * n / 2];
    let (median, coverage) = if mid == u64::MAX {
        (f64::INFINITY, r / n2)
    } else {
        let below = all.iter().filter(|&&d| d <= mid).count();
        (mid as f64, below as f64 / n2)
    };

    EnumMetrics {
        avg: dist_sum as f64 / r,
        confidence: r / n2,
        harmonic,
        median,
        coverage,
        reachable_pairs: r,
    }
}

pub fn fraction_within_oracle(dm: &[Vec<Option<u32>>], t: usize) -> f64 {
    let n = dm.len();
    let hits = dm
        .iter()
        .flatten()
        .filter(|d| d.is_some_and(|x| x as usize <= t))
        .count();
    hits as f64 / (n * n) as f64
}

/// Ordered pairs at distance exactly 3.
pub fn p3_from_matrix(dm: &[Vec<Option<u32>>]) -> u64 {
    dm.iter().flatten().filter(|d| **d == Some(3)).count() as u64
}

/// Reachable ordered pairs by iterating a bitset closure to fixpoint; no
/// BFS involved.
pub fn reachable_pairs_closure(g: &Graph) -> u64 {
    let n = g.num_nodes();
    let words = n.div_ceil(64);
    let mut reach = vec![vec![0u64; words]; n];
    for u in 0..n {
        reach[u][u / 64] |= 1 << (u % 64);
        for &v in g.neighbors(u as Node) {
            reach[u][v as usize / 64] |= 1 << (v as usize % 64);
        }
    }
    loop {
        let mut changed = false;
        for u in 0..n {
            let mut acc = reach[u].clone();
            for &v in g.neighbors(u as Node) {
                for (w, &bits) in reach[v as usize].iter().enumerate() {
                    acc[w] |= bits;
                }
            }
            if acc != reach[u] {
                reach[u] = acc;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    reach
        .iter()
        .map(|row| row.iter().map(|w| w.count_ones() as u64).sum::<u64>())
        .sum()
}

/// Erdos-Renyi graph with arc probability `p`, reproducible per seed.
pub fn er_graph(n: u32, p: f64, directed: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Graph::from_edges(n as usize, arcs, directed)
}

pub fn path(n: u32) -> Graph {
    Graph::from_edges(n as usize, (1..n).map(|v| (v - 1, v)), false)
}

pub fn star(leaves: u32) -> Graph {
    Graph::from_edges(0, (1..=leaves).map(|v| (0, v)), false)
}

pub fn perfect_matching(n: u32) -> Graph {
    assert!(n.is_multiple_of(2));
    Graph::from_edges(0, (0..n / 2).map(|i| (2 * i, 2 * i + 1)), false)
}

pub fn complete(n: u32) -> Graph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            arcs.push((u, v));
        }
    }
    Graph::from_edges(n as usize, arcs, false)
}

pub fn edgeless(n: u32) -> Graph {
    Graph::from_edges(n as usize, [], false)
}

/// Relative closeness with an absolute floor, infinities compared exactly.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Compares a pipeline report against the enumeration oracle field by field.
pub fn assert_report_matches(report: &MetricsReport, oracle: &EnumMetrics, tol: f64, label: &str) {
    assert!(
        close(report.avg_distance, oracle.avg, tol),
        "{label}: avg {} vs oracle {}",
        report.avg_distance,
        oracle.avg
    );
    assert!(
        close(report.confidence, oracle.confidence, tol),
        "{label}: confidence {} vs oracle {}",
        report.confidence,
        oracle.confidence
    );
    assert!(
        close(report.harmonic_diameter, oracle.harmonic, tol),
        "{label}: harmonic {} vs oracle {}",
        report.harmonic_diameter,
        oracle.harmonic
    );
    assert!(
        report.median_distance == oracle.median
            || (report.median_distance.is_infinite() && oracle.median.is_infinite()),
        "{label}: median {} vs oracle {}",
        report.median_distance,
        oracle.median
    );
    assert!(
        close(report.median_coverage, oracle.coverage, tol),
        "{label}: coverage {} vs oracle {}",
        report.median_coverage,
        oracle.coverage
    );
    assert!(
        close(report.reachable_pairs, oracle.reachable_pairs, tol),
        "{label}: reachable {} vs oracle {}",
        report.reachable_pairs,
        oracle.reachable_pairs
    );
}
