//! Lower bounds on the average distance from aggregate quantities, plus the
//! brute-force distance census used to sanity-check them.
//!
//! The core inequality: if B_k bounds the number of ordered pairs at
//! distance exactly k for k = 1..=L, then under-placing all remaining
//! reachable distinct pairs at distance L+1 can only shrink the average.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{fold_sources, Parallelism};
use crate::graph::{DegreeSequence, Graph, Node};

/// Largest node count `p_census` accepts without `force`.
pub const CENSUS_NODE_GUARD: usize = 10_000;

/// Aggregate inputs for the averaging bound. Scalars are `f64` so that
/// published-scale numbers (`5e17` pairs) pass through unharmed.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundInput {
    /// Reachable ordered pairs, self pairs included.
    pub r: f64,
    /// Node count; the n self pairs sit at distance zero.
    pub n: f64,
    /// bounds[k-1] caps the pairs at distance exactly k, k = 1..=len.
    pub bounds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    /// Valid only when `feasible`; zero otherwise.
    pub avg_lower_bound: f64,
    /// Distance assigned to the residual mass (len(bounds) + 1 when feasible).
    pub ell_used: usize,
    /// Whether the caps leave room for the r - n distinct reachable pairs.
    pub feasible: bool,
    /// On infeasible input, the longest prefix of `bounds` that would fit.
    pub feasible_prefix: Option<usize>,
}

/// Averaging bound: mean distance over reachable pairs is at least
/// `(sum k * B_k + (L+1) * (r - n - sum B_k)) / r`.
///
/// Infeasible caps (sum exceeding r - n) yield `feasible = false` and the
/// longest usable prefix instead of an error, so callers can retry.
pub fn lower_bound_from_caps(input: &BoundInput) -> Result<BoundResult> {
    let BoundInput { r, n, bounds } = input;
    if !r.is_finite() || !n.is_finite() || *n < 1.0 || r < n {
        return Err(Error::Contract(format!(
            "need finite r >= n >= 1, got r = {r}, n = {n}"
        )));
    }
    if let Some(bad) = bounds.iter().find(|b| !b.is_finite() || **b < 0.0) {
        return Err(Error::Contract(format!(
            "per-distance caps must be finite and nonnegative, got {bad}"
        )));
    }

    let slack = r - n;
    let total: f64 = bounds.iter().sum();
    if total > slack {
        let mut run = 0.0;
        let mut fit = 0usize;
        for (i, b) in bounds.iter().enumerate() {
            run += b;
            if run > slack {
                break;
            }
            fit = i + 1;
        }
        return Ok(BoundResult {
            avg_lower_bound: 0.0,
            ell_used: 0,
            feasible: false,
            feasible_prefix: Some(fit),
        });
    }

    let ell = bounds.len() + 1;
    let mut weighted = 0.0;
    for (i, b) in bounds.iter().enumerate() {
        weighted += (i + 1) as f64 * b;
    }
    weighted += ell as f64 * (slack - total);
    Ok(BoundResult {
        avg_lower_bound: weighted / r,
        ell_used: ell,
        feasible: true,
        feasible_prefix: None,
    })
}

/// Bound from the aggregate scalars everyone publishes: caps the pairs at
/// distance k by `m * D^(k-1)` (every path prefix is an arc with fan-out at most
/// D) and applies the averaging bound with the longest cap list, at most
/// `max_ell - 1` entries, that stays feasible. The empty list always fits,
/// so this cannot come back infeasible.
pub fn walk_count_bound(
    n: f64,
    m: f64,
    max_degree: f64,
    r: f64,
    max_ell: usize,
) -> Result<BoundResult> {
    for (label, v) in [("n", n), ("m", m), ("max_degree", max_degree), ("r", r)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Contract(format!(
                "{label} must be finite and nonnegative, got {v}"
            )));
        }
    }
    if max_ell < 1 {
        return Err(Error::Contract("max_ell must be at least 1".into()));
    }

    for len in (0..max_ell).rev() {
        let mut caps = Vec::with_capacity(len);
        let mut cap = m;
        for _ in 0..len {
            caps.push(cap);
            cap *= max_degree;
        }
        let result = lower_bound_from_caps(&BoundInput { r, n, bounds: caps })?;
        if result.feasible {
            return Ok(result);
        }
    }
    unreachable!("the empty cap list is always feasible");
}

/// Sum of the `d_t` largest degrees: the most new nodes a hop from a
/// distance-t node can expose.
pub fn delta(seq: &DegreeSequence, t: usize) -> Result<u128> {
    let n = seq.len();
    if t >= n {
        return Err(Error::Contract(format!(
            "position {t} out of range for {n} degrees"
        )));
    }
    let width = seq.degrees()[t] as usize;
    if width > n {
        return Err(Error::Contract(format!(
            "degree {width} exceeds the number of nodes {n}"
        )));
    }
    Ok(seq.degrees()[..width].iter().map(|&d| d as u128).sum())
}

/// Upper bound on ordered pairs at distance exactly 3, from the degree
/// sequence alone. Counts distance-3 walks: s = sum of squared degrees walks
/// of length two, each extended through at most delta(k) endpoints, greedily
/// charged to the largest-degree nodes first.
pub fn distance3_pair_bound(seq: &DegreeSequence) -> Result<f64> {
    let n = seq.len();
    if n == 0 {
        return Ok(0.0);
    }
    let degrees = seq.degrees();
    if degrees[0] as usize > n - 1 {
        return Err(Error::Contract(format!(
            "degree {} impossible among {n} nodes",
            degrees[0]
        )));
    }

    // prefix[i] = sum of the i largest degrees, so delta(t) = prefix[d_t].
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u128);
    for &d in degrees {
        prefix.push(prefix.last().unwrap() + d as u128);
    }
    let s: u128 = degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
    let delta_at = |t: usize| prefix[degrees[t] as usize];

    if delta_at(0) >= s {
        return Ok(degrees[0] as f64 * s as f64);
    }

    // Largest ell with delta(0) + ... + delta(ell) < s.
    let mut spent = 0u128;
    let mut ell = 0usize;
    for k in 0..n {
        let next = spent + delta_at(k);
        if next < s {
            spent = next;
            ell = k;
        } else {
            break;
        }
    }

    let mut bound = 0.0f64;
    for (k, &d) in degrees.iter().enumerate().take(ell + 1) {
        bound += (d as u128 * delta_at(k)) as f64;
    }
    if ell + 1 < n {
        bound += (degrees[ell + 1] as u128 * (s - spent)) as f64;
    }
    Ok(bound)
}

struct CensusScratch {
    dist: Vec<u32>,
    queue: VecDeque<Node>,
    hist: Vec<u64>,
}

/// Exact per-distance pair counts by queue BFS from every source:
/// `census[k]` = ordered pairs at distance exactly k, `census[0] = n`.
/// Refuses graphs beyond `CENSUS_NODE_GUARD` nodes unless `force` is set.
pub fn p_census(
    g: &Graph,
    k_max: Option<usize>,
    force: bool,
    par: Parallelism,
) -> Result<Vec<u64>> {
    let n = g.num_nodes();
    if n > CENSUS_NODE_GUARD && !force {
        return Err(Error::Guard(format!(
            "census over {n} nodes means {n}^2 BFS pair visits; pass force to run anyway"
        )));
    }
    let cap = k_max.unwrap_or(usize::MAX);
    let merged = fold_sources(
        par,
        n,
        || CensusScratch {
            dist: vec![u32::MAX; n],
            queue: VecDeque::new(),
            hist: vec![0],
        },
        |scratch, src| {
            scratch.dist.fill(u32::MAX);
            scratch.dist[src] = 0;
            scratch.queue.clear();
            scratch.queue.push_back(src as Node);
            scratch.hist[0] += 1;
            while let Some(u) = scratch.queue.pop_front() {
                let du = scratch.dist[u as usize] as usize;
                if du >= cap {
                    continue;
                }
                for &v in g.neighbors(u) {
                    if scratch.dist[v as usize] == u32::MAX {
                        scratch.dist[v as usize] = du as u32 + 1;
                        if scratch.hist.len() <= du + 1 {
                            scratch.hist.resize(du + 2, 0);
                        }
                        scratch.hist[du + 1] += 1;
                        scratch.queue.push_back(v);
                    }
                }
            }
        },
        |mut a, b| {
            if a.hist.len() < b.hist.len() {
                a.hist.resize(b.hist.len(), 0);
            }
            for (k, c) in b.hist.into_iter().enumerate() {
                a.hist[k] += c;
            }
            a
        },
    );
    Ok(merged.hist)
}
