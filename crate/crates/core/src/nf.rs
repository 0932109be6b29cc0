//! Neighborhood function engines: exact BFS sweeps and sketch diffusion.
//!
//! The neighborhood function N(t) counts ordered pairs (x, y) with
//! d(x, y) <= t, self pairs included. Its increments are the distance
//! distribution: P_k pairs at distance exactly k, with the final value
//! r = N(T) counting all reachable ordered pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{fold_sources, map_indexed, Parallelism};
use crate::graph::{Graph, Node};
use crate::sketch::HllCounter;

/// One N(t) value per step t = 0..=T.
///
/// T is where the engine stopped: for the exact engine the last strict
/// growth step, for the estimator the step that triggered the relative
/// change cutoff (that step stays in `values`).
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodFunction {
    pub values: Vec<f64>,
    /// True when produced by exact counting; values are then integral.
    pub exact: bool,
    pub n: u64,
}

/// Per-distance pair counts derived from a neighborhood function.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceDistribution {
    /// counts[k] estimates P_k; estimator noise is clamped at zero.
    pub counts: Vec<f64>,
    /// Unclamped increments, kept for diagnostics. counts differs only in
    /// estimated mode and only where an increment went negative.
    pub raw_increments: Vec<f64>,
    pub n: u64,
    /// Reachable ordered pairs, N(T).
    pub r: f64,
    pub exact: bool,
}

/// Tuning for the sketch-diffusion engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HllParams {
    /// log2 of the register count per counter.
    pub register_exp: u8,
    pub seed: u64,
    /// Stop once |N(t) - N(t-1)| / N(t-1) drops below this.
    pub eps: f64,
    /// Hard iteration cap.
    pub max_t: usize,
}

impl Default for HllParams {
    fn default() -> HllParams {
        HllParams {
            register_exp: 8,
            seed: 0,
            eps: 1e-4,
            max_t: 128,
        }
    }
}

struct BfsScratch {
    dist: Vec<u32>,
    frontier: Vec<Node>,
    next: Vec<Node>,
    /// hist[k] accumulates ordered pairs at distance exactly k.
    hist: Vec<u64>,
}

impl BfsScratch {
    fn new(n: usize) -> BfsScratch {
        BfsScratch {
            dist: vec![u32::MAX; n],
            frontier: Vec::new(),
            next: Vec::new(),
            hist: vec![0],
        }
    }

    fn sweep(&mut self, g: &Graph, src: usize) {
        self.dist.fill(u32::MAX);
        self.dist[src] = 0;
        self.frontier.clear();
        self.frontier.push(src as Node);
        self.hist[0] += 1;
        let mut level = 0u32;
        while !self.frontier.is_empty() {
            self.next.clear();
            level += 1;
            for &u in &self.frontier {
                for &v in g.neighbors(u) {
                    if self.dist[v as usize] == u32::MAX {
                        self.dist[v as usize] = level;
                        self.next.push(v);
                    }
                }
            }
            if self.next.is_empty() {
                break;
            }
            if self.hist.len() <= level as usize {
                self.hist.resize(level as usize + 1, 0);
            }
            self.hist[level as usize] += self.next.len() as u64;
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
    }

    fn absorb(mut self, other: BfsScratch) -> BfsScratch {
        if self.hist.len() < other.hist.len() {
            self.hist.resize(other.hist.len(), 0);
        }
        for (k, c) in other.hist.into_iter().enumerate() {
            self.hist[k] += c;
        }
        self
    }
}

/// Exact neighborhood function by one BFS per source. Pair counts are summed
/// as integers, so results are identical on every execution path. `max_t`
/// truncates the reported range without changing any value inside it.
pub fn exact_nf(g: &Graph, max_t: Option<usize>, par: Parallelism) -> NeighborhoodFunction {
    let n = g.num_nodes();
    let merged = fold_sources(
        par,
        n,
        || BfsScratch::new(n),
        |scratch, src| scratch.sweep(g, src),
        BfsScratch::absorb,
    );
    let mut hist = merged.hist;
    if let Some(cap) = max_t {
        hist.truncate(cap + 1);
    }
    let mut values = Vec::with_capacity(hist.len());
    let mut acc = 0u64;
    for c in hist {
        acc += c;
        values.push(acc as f64);
    }
    NeighborhoodFunction {
        values,
        exact: true,
        n: n as u64,
    }
}

/// Neighborhood function by HyperLogLog ball diffusion: every node carries a
/// counter of its out-ball, and one synchronous round unions each counter
/// with its out-neighbors' previous-round counters.
///
/// N(t) sums the per-node estimates in node order with a plain sequential
/// accumulator, which keeps the output byte-identical across thread counts.
pub fn hll_nf(g: &Graph, params: &HllParams, par: Parallelism) -> Result<NeighborhoodFunction> {
    if !params.eps.is_finite() || params.eps < 0.0 {
        return Err(Error::Contract(format!(
            "eps must be finite and nonnegative, got {}",
            params.eps
        )));
    }
    // Validates register_exp as a side effect.
    HllCounter::new(params.register_exp, params.seed)?;

    let n = g.num_nodes();
    if n == 0 {
        return Ok(NeighborhoodFunction {
            values: vec![0.0],
            exact: false,
            n: 0,
        });
    }

    let mut balls: Vec<HllCounter> = map_indexed(par, n, |x| {
        let mut c = HllCounter::new(params.register_exp, params.seed).expect("validated above");
        c.insert(x as u64);
        c
    });
    let mut values = vec![estimate_sum(par, &balls)];

    for _ in 1..=params.max_t {
        balls = map_indexed(par, n, |x| {
            let mut c = balls[x].clone();
            for &y in g.neighbors(x as Node) {
                c.merge_unchecked(&balls[y as usize]);
            }
            c
        });
        let prev = *values.last().expect("seeded with N(0)");
        let cur = estimate_sum(par, &balls);
        values.push(cur);
        let rel = if prev > 0.0 {
            ((cur - prev) / prev).abs()
        } else if cur == prev {
            0.0
        } else {
            f64::INFINITY
        };
        if rel < params.eps {
            break;
        }
    }

    Ok(NeighborhoodFunction {
        values,
        exact: false,
        n: n as u64,
    })
}

fn estimate_sum(par: Parallelism, balls: &[HllCounter]) -> f64 {
    map_indexed(par, balls.len(), |i| balls[i].estimate())
        .into_iter()
        .sum()
}

/// Differences of consecutive N(t) values. In estimated mode a negative
/// increment (estimator noise) is clamped to zero in `counts` and preserved
/// in `raw_increments`.
pub fn distribution_from_nf(nf: &NeighborhoodFunction) -> DistanceDistribution {
    let mut counts = Vec::with_capacity(nf.values.len());
    let mut raw = Vec::with_capacity(nf.values.len());
    for (k, &v) in nf.values.iter().enumerate() {
        let inc = if k == 0 { v } else { v - nf.values[k - 1] };
        raw.push(inc);
        counts.push(if nf.exact { inc } else { inc.max(0.0) });
    }
    DistanceDistribution {
        counts,
        raw_increments: raw,
        n: nf.n,
        r: nf.values.last().copied().unwrap_or(0.0),
        exact: nf.exact,
    }
}

/// TSV dump, one row per step: t, N(t), raw increment.
pub fn nf_to_tsv(nf: &NeighborhoodFunction) -> String {
    let mut out = String::from("t\tnf\traw_increment\n");
    for (t, &v) in nf.values.iter().enumerate() {
        let inc = if t == 0 { v } else { v - nf.values[t - 1] };
        out.push_str(&format!("{t}\t{v}\t{inc}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn nf_values(g: &Graph) -> Vec<f64> {
        exact_nf(g, None, Parallelism::Sequential).values
    }

    #[test]
    fn path_of_three_counts_pairs_by_level() {
        let g = Graph::from_edges(0, [(0, 1), (1, 2)], false);
        assert_eq!(nf_values(&g), vec![3.0, 7.0, 9.0]);
    }

    #[test]
    fn edgeless_stops_at_n() {
        let g = Graph::from_edges(5, [], false);
        assert_eq!(nf_values(&g), vec![5.0]);
    }

    #[test]
    fn empty_graph_reports_zero() {
        let g = Graph::from_edges(0, [], false);
        assert_eq!(nf_values(&g), vec![0.0]);
        let nf = hll_nf(&g, &HllParams::default(), Parallelism::Sequential).unwrap();
        assert_eq!(nf.values, vec![0.0]);
    }

    #[test]
    fn complete_graph_saturates_in_one_step() {
        let mut arcs = Vec::new();
        for u in 0..6u32 {
            for v in (u + 1)..6 {
                arcs.push((u, v));
            }
        }
        let g = Graph::from_edges(0, arcs, false);
        assert_eq!(nf_values(&g), vec![6.0, 36.0]);
    }

    #[test]
    fn directed_path_counts_ordered_pairs_only() {
        let g = Graph::from_edges(0, [(0, 1), (1, 2)], true);
        assert_eq!(nf_values(&g), vec![3.0, 5.0, 6.0]);
    }

    #[test]
    fn max_t_truncates_without_changing_values() {
        let g = Graph::from_edges(0, [(0, 1), (1, 2), (2, 3)], false);
        let full = exact_nf(&g, None, Parallelism::Sequential);
        let cut = exact_nf(&g, Some(1), Parallelism::Sequential);
        assert_eq!(cut.values, full.values[..2]);
    }

    #[test]
    fn distribution_of_path_three() {
        let g = Graph::from_edges(0, [(0, 1), (1, 2)], false);
        let d = distribution_from_nf(&exact_nf(&g, None, Parallelism::Sequential));
        assert_eq!(d.counts, vec![3.0, 4.0, 2.0]);
        assert_eq!(d.r, 9.0);
        assert_eq!(d.n, 3);
    }

    #[test]
    fn estimated_distribution_clamps_noise_but_keeps_raw() {
        let nf = NeighborhoodFunction {
            values: vec![4.0, 9.5, 9.25, 9.375],
            exact: false,
            n: 4,
        };
        let d = distribution_from_nf(&nf);
        assert_eq!(d.raw_increments, vec![4.0, 5.5, -0.25, 0.125]);
        assert_eq!(d.counts, vec![4.0, 5.5, 0.0, 0.125]);
        assert_eq!(d.r, 9.375);
    }

    #[test]
    fn tsv_dump_lists_increments() {
        let g = Graph::from_edges(0, [(0, 1), (1, 2)], false);
        let nf = exact_nf(&g, None, Parallelism::Sequential);
        assert_eq!(
            nf_to_tsv(&nf),
            "t\tnf\traw_increment\n0\t3\t3\n1\t7\t4\n2\t9\t2\n"
        );
    }

    #[test]
    fn diffusion_on_edgeless_converges_immediately() {
        let g = Graph::from_edges(4, [], false);
        let nf = hll_nf(&g, &HllParams::default(), Parallelism::Sequential).unwrap();
        assert_eq!(nf.values.len(), 2);
        assert_eq!(nf.values[0], nf.values[1]);
        let rel = (nf.values[0] - 4.0).abs() / 4.0;
        assert!(rel < 0.5, "N(0) = {} too far from 4", nf.values[0]);
    }

    #[test]
    fn diffusion_rejects_bad_params() {
        let g = Graph::from_edges(2, [(0, 1)], false);
        let bad_b = HllParams {
            register_exp: 2,
            ..HllParams::default()
        };
        assert!(hll_nf(&g, &bad_b, Parallelism::Sequential).is_err());
        let bad_eps = HllParams {
            eps: -0.5,
            ..HllParams::default()
        };
        assert!(hll_nf(&g, &bad_eps, Parallelism::Sequential).is_err());
    }

    #[test]
    fn complete_graph_estimate_tracks_n_squared() {
        let mut arcs = Vec::new();
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                arcs.push((u, v));
            }
        }
        let g = Graph::from_edges(0, arcs, false);
        let params = HllParams {
            register_exp: 12,
            ..HllParams::default()
        };
        let nf = hll_nf(&g, &params, Parallelism::Sequential).unwrap();
        let final_v = *nf.values.last().unwrap();
        assert!((final_v - 16.0).abs() / 16.0 < 0.25, "N(T) = {final_v}");
    }

    #[test]
    fn zero_eps_runs_to_the_cap() {
        let g = Graph::from_edges(3, [(0, 1)], false);
        let params = HllParams {
            eps: 0.0,
            max_t: 5,
            ..HllParams::default()
        };
        let nf = hll_nf(&g, &params, Parallelism::Sequential).unwrap();
        assert_eq!(nf.values.len(), 6);
    }
}
