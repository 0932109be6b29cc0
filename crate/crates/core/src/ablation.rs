//! Node-removal experiments: strip the highest in-degree nodes until a
//! target fraction of arcs is gone, then re-measure the distance metrics.

use std::cmp::Reverse;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::graph::{Graph, Node};
use crate::metrics::{evaluate_graph, ser_real_or_inf, MetricsReport, Mode};
use crate::nf::HllParams;

/// Nodes sorted by descending in-degree, ties by ascending id. For
/// undirected graphs in-degree equals out-degree, so one rule covers both.
pub fn removal_order(g: &Graph) -> Vec<Node> {
    let degs = g.in_degrees();
    let mut order: Vec<Node> = (0..g.num_nodes() as Node).collect();
    order.sort_by_key(|&u| (Reverse(degs[u as usize]), u));
    order
}

/// Metrics of one surviving subgraph, next to the arc mass that was cut.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AblationRow {
    pub target: f64,
    pub nodes_removed: u64,
    pub arcs_removed: u64,
    pub avg_distance: f64,
    #[serde(serialize_with = "ser_real_or_inf")]
    pub avg_change_pct: f64,
    #[serde(serialize_with = "ser_real_or_inf")]
    pub harmonic_diameter: f64,
    #[serde(serialize_with = "ser_real_or_inf")]
    pub harmonic_change_pct: f64,
    pub confidence: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AblationReport {
    pub original: MetricsReport,
    pub rows: Vec<AblationRow>,
}

/// Relative change in percent, totalized for the infinite and zero cases so
/// that every row renders: equal infinities count as no change, leaving
/// infinity is -100 percent territory (reported as -inf), reaching it +inf.
pub fn change_pct(before: f64, after: f64) -> f64 {
    if before.is_infinite() && after.is_infinite() {
        0.0
    } else if before.is_infinite() {
        f64::NEG_INFINITY
    } else if before == 0.0 {
        if after == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (after - before) / before
    }
}

/// Removes nodes in `removal_order` until at least `target * m_original`
/// arcs are gone, once per target, re-measuring after each stop. Targets
/// must be strictly increasing fractions in (0, 1]; the removal sequence is
/// shared, so later rows extend earlier ones.
pub fn run_ablation(
    g: &Graph,
    targets: &[f64],
    mode: Mode,
    params: &HllParams,
    par: Parallelism,
) -> Result<AblationReport> {
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::UndefinedInput(
            "removal experiment needs a nonempty graph".into(),
        ));
    }
    for (i, &t) in targets.iter().enumerate() {
        if !t.is_finite() || t <= 0.0 || t > 1.0 {
            return Err(Error::Contract(format!(
                "targets must lie in (0, 1], got {t}"
            )));
        }
        if i > 0 && t <= targets[i - 1] {
            return Err(Error::Contract(format!(
                "targets must be strictly increasing, got {} after {}",
                t,
                targets[i - 1]
            )));
        }
    }

    let original = evaluate_graph(g, mode, params, par)?;
    let m_original = g.num_arcs();
    let order = removal_order(g);

    // In-neighbors are needed to count a directed node's incoming arcs; the
    // transpose of an undirected graph is itself, so skip the copy there.
    let transpose = if g.is_directed() {
        Some(g.transpose())
    } else {
        None
    };

    let mut alive = vec![true; n];
    let mut cut = 0u64;
    let mut removed = 0usize;
    let mut rows = Vec::with_capacity(targets.len());
    for &target in targets {
        let threshold = target * m_original as f64;
        while (cut as f64) < threshold && removed < n {
            let v = order[removed];
            let out_alive = g
                .neighbors(v)
                .iter()
                .filter(|&&w| alive[w as usize])
                .count() as u64;
            cut += match &transpose {
                Some(t) => {
                    out_alive
                        + t.neighbors(v)
                            .iter()
                            .filter(|&&w| alive[w as usize])
                            .count() as u64
                }
                None => 2 * out_alive,
            };
            alive[v as usize] = false;
            removed += 1;
        }

        let (sub, _) = g.remove_nodes(&order[..removed])?;
        let arcs_removed = m_original - sub.num_arcs();
        debug_assert_eq!(arcs_removed, cut);
        let report = evaluate_graph(&sub, mode, params, par)?;
        rows.push(AblationRow {
            target,
            nodes_removed: removed as u64,
            arcs_removed,
            avg_distance: report.avg_distance,
            avg_change_pct: change_pct(original.avg_distance, report.avg_distance),
            harmonic_diameter: report.harmonic_diameter,
            harmonic_change_pct: change_pct(original.harmonic_diameter, report.harmonic_diameter),
            confidence: report.confidence,
        });
    }

    Ok(AblationReport { original, rows })
}

impl AblationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Transposed table, metrics as rows and one column pair per target.
    pub fn to_tsv(&self) -> String {
        let mut header = String::from("metric\toriginal");
        for row in &self.rows {
            header.push_str(&format!("\t@{}\tchange@{0}", row.target));
        }
        header.push('\n');

        let fmt = |v: f64| {
            if v.is_finite() {
                format!("{v}")
            } else if v > 0.0 {
                "inf".to_string()
            } else {
                "-inf".to_string()
            }
        };
        let fmt_pct = |v: f64| {
            if v.is_finite() {
                format!("{v:+.1}%")
            } else if v > 0.0 {
                "+inf%".to_string()
            } else {
                "-inf%".to_string()
            }
        };

        let mut out = header;
        out.push_str(&format!(
            "avg_distance\t{}",
            fmt(self.original.avg_distance)
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "\t{}\t{}",
                fmt(row.avg_distance),
                fmt_pct(row.avg_change_pct)
            ));
        }
        out.push('\n');

        out.push_str(&format!(
            "harmonic_diameter\t{}",
            fmt(self.original.harmonic_diameter)
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "\t{}\t{}",
                fmt(row.harmonic_diameter),
                fmt_pct(row.harmonic_change_pct)
            ));
        }
        out.push('\n');

        out.push_str(&format!("confidence\t{}", fmt(self.original.confidence)));
        for row in &self.rows {
            out.push_str(&format!("\t{}\t-", fmt(row.confidence)));
        }
        out.push('\n');

        out.push_str("nodes_removed\t0");
        for row in &self.rows {
            out.push_str(&format!("\t{}\t-", row.nodes_removed));
        }
        out.push('\n');

        out.push_str("arcs_removed\t0");
        for row in &self.rows {
            out.push_str(&format!("\t{}\t-", row.arcs_removed));
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(g: &Graph, targets: &[f64]) -> AblationReport {
        run_ablation(
            g,
            targets,
            Mode::Exact,
            &HllParams::default(),
            Parallelism::Sequential,
        )
        .unwrap()
    }

    #[test]
    fn order_prefers_high_in_degree_then_low_id() {
        let star = Graph::from_edges(0, [(0, 1), (0, 2), (0, 3)], false);
        assert_eq!(removal_order(&star), vec![0, 1, 2, 3]);
        let cycle_plus = Graph::from_edges(0, [(0, 1), (1, 0), (2, 0)], true);
        assert_eq!(removal_order(&cycle_plus), vec![0, 1, 2]);
        let matching = Graph::from_edges(0, [(0, 1), (2, 3)], false);
        assert_eq!(removal_order(&matching), vec![0, 1, 2, 3]);
    }

    #[test]
    fn star_collapses_at_the_first_target() {
        let star = Graph::from_edges(0, [(0, 1), (0, 2), (0, 3)], false);
        let report = exact(&star, &[0.1]);
        assert_eq!(report.original.avg_distance, 1.125);
        let row = &report.rows[0];
        assert_eq!(row.nodes_removed, 1);
        assert_eq!(row.arcs_removed, 6);
        assert_eq!(row.avg_distance, 0.0);
        assert_eq!(row.avg_change_pct, -100.0);
        assert_eq!(row.harmonic_diameter, f64::INFINITY);
        assert_eq!(row.harmonic_change_pct, f64::INFINITY);
        assert!((row.confidence - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn directed_removal_counts_both_arc_directions() {
        // 0 <-> 1 plus 2 -> 0: removing node 0 kills all three arcs.
        let g = Graph::from_edges(0, [(0, 1), (1, 0), (2, 0)], true);
        let report = exact(&g, &[1.0]);
        let row = &report.rows[0];
        assert_eq!(row.nodes_removed, 1);
        assert_eq!(row.arcs_removed, 3);
    }

    #[test]
    fn increasing_targets_extend_the_same_removal_sequence() {
        let path = Graph::from_edges(0, [(0, 1), (1, 2), (2, 3), (3, 4)], false);
        let report = exact(&path, &[0.25, 1.0]);
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].nodes_removed <= report.rows[1].nodes_removed);
        assert!(report.rows[0].arcs_removed <= report.rows[1].arcs_removed);
        let last = &report.rows[1];
        assert_eq!(last.arcs_removed, 8);
        assert_eq!(last.avg_distance, 0.0);
    }

    #[test]
    fn bad_targets_are_rejected() {
        let g = Graph::from_edges(0, [(0, 1)], false);
        let params = HllParams::default();
        for bad in [
            vec![0.0],
            vec![1.5],
            vec![0.3, 0.3],
            vec![0.3, 0.1],
            vec![f64::NAN],
        ] {
            assert!(
                run_ablation(&g, &bad, Mode::Exact, &params, Parallelism::Sequential).is_err(),
                "targets {bad:?} should be rejected"
            );
        }
        let empty = Graph::from_edges(0, [], false);
        assert!(run_ablation(
            &empty,
            &[0.5],
            Mode::Exact,
            &params,
            Parallelism::Sequential
        )
        .is_err());
    }

    #[test]
    fn change_pct_totalization() {
        assert_eq!(change_pct(f64::INFINITY, f64::INFINITY), 0.0);
        assert_eq!(change_pct(f64::INFINITY, 5.0), f64::NEG_INFINITY);
        assert_eq!(change_pct(0.0, 0.0), 0.0);
        assert_eq!(change_pct(0.0, 3.0), f64::INFINITY);
        assert_eq!(change_pct(4.0, 5.0), 25.0);
        assert_eq!(change_pct(4.0, 3.0), -25.0);
    }

    #[test]
    fn zero_arc_graph_rows_match_the_original() {
        let g = Graph::from_edges(3, [], false);
        let report = exact(&g, &[0.5]);
        let row = &report.rows[0];
        assert_eq!(row.nodes_removed, 0);
        assert_eq!(row.arcs_removed, 0);
        assert_eq!(row.avg_distance, report.original.avg_distance);
    }

    #[test]
    fn tsv_has_one_column_pair_per_target() {
        let star = Graph::from_edges(0, [(0, 1), (0, 2), (0, 3)], false);
        let report = exact(&star, &[0.1, 1.0]);
        let tsv = report.to_tsv();
        let header = tsv.lines().next().unwrap();
        assert_eq!(header, "metric\toriginal\t@0.1\tchange@0.1\t@1\tchange@1");
        assert!(tsv.lines().all(|l| l.split('\t').count() == 6));
        assert!(tsv.contains("+inf%"));
    }
}
