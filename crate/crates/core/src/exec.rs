//! Dispatch between the rayon pool and a plain loop.
//!
//! Every kernel in this crate routes through one of the two helpers below,
//! so a single `Parallelism` argument switches the whole pipeline. Outputs
//! are identical on both paths: `map_indexed` keeps index order, and
//! `fold_sources` requires an exactly associative, commutative merge
//! (integer histogram addition in practice).

/// Where a data-parallel kernel runs.
///
/// With the `parallel` feature disabled, `Parallel` quietly degrades to the
/// sequential path; results do not change, only wall-clock time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    /// Run on the rayon thread pool.
    #[default]
    Parallel,
    /// Run on the calling thread.
    Sequential,
}

/// Maps `f` over `0..n` and collects results in index order.
pub(crate) fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = par;
    (0..n).map(f).collect()
}

/// Runs `step` once per index in `0..n` against a reusable accumulator and
/// merges the partial accumulators pairwise.
///
/// `merge` must be exactly associative and commutative; the split between
/// worker threads is unspecified and must not show in the result.
pub(crate) fn fold_sources<S, I, F, M>(par: Parallelism, n: usize, init: I, step: F, merge: M) -> S
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                step(&mut acc, i);
                acc
            })
            .reduce(&init, merge);
    }
    let _ = (par, &merge);
    let mut acc = init();
    for i in 0..n {
        step(&mut acc, i);
    }
    acc
}
