//! Closeness statistics over a distance distribution.
//!
//! Every statistic reads the full multiset of n^2 ordered-pair distances,
//! where unreachable pairs sit at infinity. Partial visibility is reported
//! honestly: the average comes with the fraction of pairs it covers, the
//! median with the mass at or below it.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::graph::Graph;
use crate::nf::{distribution_from_nf, exact_nf, hll_nf, DistanceDistribution, HllParams};

/// Which engine produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Estimated,
}

/// Mean distance over reachable ordered pairs, with the fraction of all n^2
/// pairs that are reachable (the weight of evidence behind the mean).
pub fn average_distance(d: &DistanceDistribution) -> Result<(f64, f64)> {
    if d.n == 0 || d.r <= 0.0 {
        return Err(Error::UndefinedInput(
            "average distance needs at least one reachable pair".into(),
        ));
    }
    let mut weighted = 0.0f64;
    for (k, &c) in d.counts.iter().enumerate().skip(1) {
        weighted += k as f64 * c;
    }
    let n2 = d.n as f64 * d.n as f64;
    Ok((weighted / d.r, d.r / n2))
}

/// n(n-1) / sum over distinct ordered pairs of 1/d. Unreachable pairs add
/// zero, so a graph with no reachable distinct pair comes out infinite.
pub fn harmonic_diameter(d: &DistanceDistribution) -> Result<f64> {
    if d.n < 2 {
        return Err(Error::UndefinedInput(
            "harmonic diameter needs at least two nodes".into(),
        ));
    }
    let mut recip = 0.0f64;
    for (k, &c) in d.counts.iter().enumerate().skip(1) {
        recip += c / k as f64;
    }
    let n = d.n as f64;
    if recip == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(n * (n - 1.0) / recip)
    }
}

/// Median of all n^2 ordered-pair distances: the smallest t whose cumulative
/// pair count passes position floor(n^2 / 2), infinity when more than half
/// the pairs are unreachable. Also returns the mass at or below the median.
pub fn median_all_distances(d: &DistanceDistribution) -> Result<(f64, f64)> {
    if d.n == 0 {
        return Err(Error::UndefinedInput(
            "median needs at least one node".into(),
        ));
    }
    let n2 = d.n as f64 * d.n as f64;
    let half = (d.n as u128 * d.n as u128 / 2) as f64;
    let mut cum = 0.0f64;
    for (t, &c) in d.counts.iter().enumerate() {
        cum += c;
        if cum > half {
            return Ok((t as f64, cum / n2));
        }
    }
    Ok((f64::INFINITY, d.r / n2))
}

/// Fraction of all n^2 ordered pairs within distance t.
pub fn fraction_within(d: &DistanceDistribution, t: usize) -> f64 {
    if d.n == 0 {
        return 0.0;
    }
    let n2 = d.n as f64 * d.n as f64;
    d.counts.iter().take(t + 1).sum::<f64>() / n2
}

/// Full statistics bundle for one graph, ready for JSON or TSV output.
#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub mode: Mode,
    pub n: u64,
    pub directed: bool,
    pub avg_distance: f64,
    /// Fraction of ordered pairs behind `avg_distance`.
    pub confidence: f64,
    #[serde(serialize_with = "ser_real_or_inf")]
    pub harmonic_diameter: f64,
    #[serde(serialize_with = "ser_count_or_inf")]
    pub median_distance: f64,
    pub median_coverage: f64,
    pub reachable_pairs: f64,
    /// pairs_within[t] = fraction of ordered pairs within distance t.
    pub pairs_within: Vec<f64>,
    /// Present in estimated mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<HllParams>,
}

impl MetricsReport {
    /// Derives every statistic from one distribution. The harmonic diameter
    /// of a single-node graph is reported as infinite (no distinct pair
    /// contributes) rather than being an error, so shrinking pipelines can
    /// always produce a row.
    pub fn from_distribution(
        d: &DistanceDistribution,
        directed: bool,
        estimator: Option<HllParams>,
    ) -> Result<MetricsReport> {
        let (avg, confidence) = average_distance(d)?;
        let harmonic = if d.n < 2 {
            f64::INFINITY
        } else {
            harmonic_diameter(d)?
        };
        let (median, coverage) = median_all_distances(d)?;
        let pairs_within = (0..d.counts.len()).map(|t| fraction_within(d, t)).collect();
        Ok(MetricsReport {
            mode: if d.exact {
                Mode::Exact
            } else {
                Mode::Estimated
            },
            n: d.n,
            directed,
            avg_distance: avg,
            confidence,
            harmonic_diameter: harmonic,
            median_distance: median,
            median_coverage: coverage,
            reachable_pairs: d.r,
            pairs_within,
            estimator,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Single header plus single data row; infinities print as `inf`.
    pub fn to_tsv(&self) -> String {
        let mode = match self.mode {
            Mode::Exact => "exact",
            Mode::Estimated => "estimated",
        };
        let mut out = String::from(
            "mode\tn\tdirected\tavg_distance\tconfidence\tharmonic_diameter\tmedian_distance\t\
             median_coverage\treachable_pairs\tregister_exp\tseed\teps\tmax_t\n",
        );
        let (b, seed, eps, max_t) = match &self.estimator {
            Some(p) => (
                p.register_exp.to_string(),
                p.seed.to_string(),
                p.eps.to_string(),
                p.max_t.to_string(),
            ),
            None => ("-".into(), "-".into(), "-".into(), "-".into()),
        };
        out.push_str(&format!(
            "{mode}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{b}\t{seed}\t{eps}\t{max_t}\n",
            self.n,
            self.directed,
            self.avg_distance,
            self.confidence,
            self.harmonic_diameter,
            fmt_count_or_inf(self.median_distance),
            self.median_coverage,
            self.reachable_pairs,
        ));
        out
    }
}

/// One-call pipeline: graph to report through the chosen engine.
pub fn evaluate_graph(
    g: &Graph,
    mode: Mode,
    params: &HllParams,
    par: Parallelism,
) -> Result<MetricsReport> {
    let nf = match mode {
        Mode::Exact => exact_nf(g, None, par),
        Mode::Estimated => hll_nf(g, params, par)?,
    };
    let d = distribution_from_nf(&nf);
    let estimator = match mode {
        Mode::Exact => None,
        Mode::Estimated => Some(*params),
    };
    MetricsReport::from_distribution(&d, g.is_directed(), estimator)
}

pub(crate) fn fmt_count_or_inf(v: f64) -> String {
    if v.is_finite() {
        format!("{}", v as u64)
    } else {
        "inf".into()
    }
}

/// JSON has no infinity literal; emit the string "inf" instead.
pub(crate) fn ser_real_or_inf<S: Serializer>(
    v: &f64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub(crate) fn ser_count_or_inf<S: Serializer>(
    v: &f64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_u64(*v as u64)
    } else {
        s.serialize_str("inf")
    }
}
