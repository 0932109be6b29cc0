//! Distance-distribution analytics for unweighted graphs.
//!
//! The pipeline runs in three stages: build a [`Graph`] (CSR adjacency),
//! produce a neighborhood function with either the exact BFS engine
//! ([`nf::exact_nf`]) or the HyperLogLog diffusion engine ([`nf::hll_nf`]),
//! then read closeness statistics off the resulting
//! [`DistanceDistribution`]. Around that core sit degree-based lower bounds
//! on the average distance ([`bounds`]), node-removal experiments
//! ([`ablation`]), and summary statistics for hop-count chain data
//! ([`chains`]).
//!
//! Heavy kernels take a [`Parallelism`] argument; with the default
//! `parallel` feature they fan out on rayon, without it they run inline.
//! Either way the output is byte-identical: per-index results are collected
//! in order and cross-thread reductions are exact integer sums.

pub mod ablation;
pub mod bounds;
pub mod chains;
mod error;
mod exec;
pub mod graph;
pub mod metrics;
pub mod nf;
pub mod sketch;

pub use error::{Error, Result};
pub use exec::Parallelism;
pub use graph::{DegreeSequence, Graph, Node};
pub use metrics::{evaluate_graph, MetricsReport, Mode};
pub use nf::{DistanceDistribution, HllParams, NeighborhoodFunction};
pub use sketch::HllCounter;
