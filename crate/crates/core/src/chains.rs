//! Statistics over experiment chain lengths, where a chain either completed
//! with a hop count or broke off (length infinity).
//!
//! The harmonic mean absorbs broken chains gracefully (an infinite length
//! contributes a zero reciprocal), which is the whole point of carrying them
//! instead of discarding them.

use std::io::BufRead;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Completed chains carry their hop count; broken chains are infinite.
/// `Broken` orders after every finite length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChainLength {
    Finite(u64),
    Broken,
}

impl Serialize for ChainLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ChainLength::Finite(k) => s.serialize_u64(*k),
            ChainLength::Broken => s.serialize_str("inf"),
        }
    }
}

/// One labelled batch of chain outcomes. Never empty.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDataset {
    group: String,
    lengths: Vec<ChainLength>,
}

impl ChainDataset {
    pub fn new(group: impl Into<String>, lengths: Vec<ChainLength>) -> Result<ChainDataset> {
        if lengths.is_empty() {
            return Err(Error::UndefinedInput(
                "a chain dataset needs at least one entry".into(),
            ));
        }
        Ok(ChainDataset {
            group: group.into(),
            lengths,
        })
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn lengths(&self) -> &[ChainLength] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn broken_count(&self) -> usize {
        self.lengths
            .iter()
            .filter(|l| **l == ChainLength::Broken)
            .count()
    }

    /// Mean over completed chains only, with the completed fraction as its
    /// weight of evidence. No completed chain at all gives (None, 0.0).
    pub fn completed_mean(&self) -> (Option<f64>, f64) {
        let mut sum = 0u128;
        let mut done = 0usize;
        for l in &self.lengths {
            if let ChainLength::Finite(k) = l {
                sum += *k as u128;
                done += 1;
            }
        }
        let confidence = done as f64 / self.lengths.len() as f64;
        if done == 0 {
            (None, confidence)
        } else {
            (Some(sum as f64 / done as f64), confidence)
        }
    }

    /// Count divided by the sum of reciprocals; broken chains add zero.
    /// All chains broken comes out infinite. A zero-length chain has no
    /// reciprocal and is rejected.
    pub fn harmonic_mean(&self) -> Result<f64> {
        let mut recip = 0.0f64;
        for l in &self.lengths {
            match l {
                ChainLength::Finite(0) => {
                    return Err(Error::Contract(
                        "zero-length chain has no reciprocal".into(),
                    ))
                }
                ChainLength::Finite(k) => recip += 1.0 / *k as f64,
                ChainLength::Broken => {}
            }
        }
        if recip == 0.0 {
            Ok(f64::INFINITY)
        } else {
            Ok(self.lengths.len() as f64 / recip)
        }
    }

    /// Entry at position floor(count / 2) with broken chains sorted last.
    pub fn median(&self) -> ChainLength {
        let mut sorted = self.lengths.clone();
        sorted.sort_unstable();
        sorted[sorted.len() / 2]
    }
}

/// Every statistic of one dataset, ready for serialization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStats {
    pub group: String,
    pub total: u64,
    pub broken: u64,
    /// None when every chain broke.
    pub completed_mean: Option<f64>,
    /// Completed fraction backing `completed_mean`.
    pub confidence: f64,
    #[serde(serialize_with = "crate::metrics::ser_real_or_inf")]
    pub harmonic_mean: f64,
    pub median: ChainLength,
}

impl ChainStats {
    pub fn compute(ds: &ChainDataset) -> Result<ChainStats> {
        let (mean, confidence) = ds.completed_mean();
        Ok(ChainStats {
            group: ds.group().to_string(),
            total: ds.len() as u64,
            broken: ds.broken_count() as u64,
            completed_mean: mean,
            confidence,
            harmonic_mean: ds.harmonic_mean()?,
            median: ds.median(),
        })
    }
}

/// Parses chain files: one entry per line, either a nonnegative hop count or
/// `*` for a broken chain. `group: LABEL` lines start a new dataset; entries
/// before any header land in a dataset named `default_group`. Blank lines
/// and `#` comments are skipped. Datasets must be nonempty.
pub fn parse_chains<R: BufRead>(reader: R, default_group: &str) -> Result<Vec<ChainDataset>> {
    let mut out = Vec::new();
    let mut group = default_group.to_string();
    let mut group_line = 0usize;
    let mut lengths: Vec<ChainLength> = Vec::new();
    let mut seen_any = false;

    let flush = |group: &str, line: usize, lengths: &mut Vec<ChainLength>| -> Result<()> {
        if lengths.is_empty() {
            return Err(Error::Parse {
                line,
                msg: format!("group {group:?} has no entries"),
            });
        }
        Ok(())
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        if let Some(label) = text.strip_prefix("group:") {
            if seen_any {
                flush(&group, group_line, &mut lengths)?;
                out.push(ChainDataset {
                    group: std::mem::take(&mut group),
                    lengths: std::mem::take(&mut lengths),
                });
            }
            group = label.trim().to_string();
            group_line = lineno;
            seen_any = true;
            continue;
        }
        seen_any = true;
        if text == "*" {
            lengths.push(ChainLength::Broken);
        } else {
            let k: u64 = text.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("expected a hop count or `*`, got {text:?}"),
            })?;
            lengths.push(ChainLength::Finite(k));
        }
    }

    if !seen_any {
        return Err(Error::UndefinedInput("chain file has no entries".into()));
    }
    flush(&group, group_line, &mut lengths)?;
    out.push(ChainDataset { group, lengths });
    Ok(out)
}

pub fn load_chains<P: AsRef<Path>>(path: P, default_group: &str) -> Result<Vec<ChainDataset>> {
    let file = std::fs::File::open(path)?;
    parse_chains(std::io::BufReader::new(file), default_group)
}

/// TSV table, one data row per dataset; `-` marks an absent completed mean.
pub fn chains_to_tsv(stats: &[ChainStats]) -> String {
    let mut out =
        String::from("group\ttotal\tbroken\tcompleted_mean\tconfidence\tharmonic_mean\tmedian\n");
    for s in stats {
        let mean = s.completed_mean.map_or("-".to_string(), |m| format!("{m}"));
        let harmonic = if s.harmonic_mean.is_finite() {
            format!("{}", s.harmonic_mean)
        } else {
            "inf".to_string()
        };
        let median = match s.median {
            ChainLength::Finite(k) => format!("{k}"),
            ChainLength::Broken => "inf".to_string(),
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{mean}\t{}\t{harmonic}\t{median}\n",
            s.group, s.total, s.broken, s.confidence
        ));
    }
    out
}

pub fn chains_to_json(stats: &[ChainStats]) -> String {
    serde_json::to_string_pretty(stats).expect("report serialization cannot fail")
}
