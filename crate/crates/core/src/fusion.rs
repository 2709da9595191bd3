//! Reciprocal Rank Fusion of TREC runs.
//!
//! A document's fused score is `Σ 1/(k + rank)` over the runs that retrieved
//! it, where `rank` is 1-based. Documents missing from a run contribute nothing.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{arp, evaluate, MeasureId, ScoreTable};
use crate::numeric;
use crate::trec::{Qrels, RankedDoc, Run};

pub const DEFAULT_K: f64 = 60.0;
pub const DEFAULT_DEPTH: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionConfig {
    pub k: f64,
    pub depth: usize,
    pub tag: String,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            depth: DEFAULT_DEPTH,
            tag: "rrf".to_string(),
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::InvalidArgument(format!("RRF k must be > 0, got {}", self.k)));
        }
        if self.depth == 0 {
            return Err(Error::InvalidArgument("fusion depth must be >= 1".into()));
        }
        Ok(())
    }
}

/// `10, 20, ..., 100`.
pub fn default_k_grid() -> Vec<f64> {
    (1..=10).map(|i| f64::from(i) * 10.0).collect()
}

pub fn rrf_fuse(runs: &[Run], config: &FusionConfig) -> Result<Run> {
    if runs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "fusion needs at least 2 runs, got {}",
            runs.len()
        )));
    }
    config.validate()?;

    let mut contributions: BTreeMap<&str, BTreeMap<&str, Vec<f64>>> = BTreeMap::new();
    for run in runs {
        for (topic, docs) in run.topics() {
            let per_doc = contributions.entry(topic).or_default();
            for (i, d) in docs.iter().enumerate() {
                per_doc
                    .entry(d.doc_id.as_str())
                    .or_default()
                    .push(1.0 / (config.k + (i + 1) as f64));
            }
        }
    }

    let topics = contributions.into_iter().map(|(topic, per_doc)| {
        let docs = per_doc
            .into_iter()
            .map(|(doc, mut terms)| {
                // summing in sorted order keeps the result independent of run order
                terms.sort_by(f64::total_cmp);
                RankedDoc::new(doc, numeric::sum(terms))
            })
            .collect();
        (topic.to_string(), docs)
    });
    let mut fused = Run::from_topics(config.tag.clone(), topics)?;
    fused.truncate(config.depth);
    Ok(fused)
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub best_k: f64,
    pub table: ScoreTable,
    /// `(k, ARP)` for every k tried, in input order.
    pub arps: Vec<(f64, f64)>,
}

/// Fuses at every `k` and keeps the one with the highest ARP on `measure`;
/// ties go to the smallest `k`.
pub fn rrf_sweep(
    runs: &[Run],
    qrels: &Qrels,
    measure: MeasureId,
    k_values: &[f64],
    config: &FusionConfig,
) -> Result<SweepResult> {
    if k_values.is_empty() {
        return Err(Error::InvalidArgument("no k values to sweep".into()));
    }
    if qrels.is_empty() {
        return Err(Error::EmptyInput("qrels contain no topics".into()));
    }
    let mut best: Option<(f64, f64, ScoreTable)> = None;
    let mut arps = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let cfg = FusionConfig { k, ..config.clone() };
        let table = evaluate(&rrf_fuse(runs, &cfg)?, qrels, &[measure])?;
        let score = arp(&table, measure, None)?;
        arps.push((k, score));
        let better = match &best {
            None => true,
            Some((bk, bs, _)) => score > *bs || (score == *bs && k < *bk),
        };
        if better {
            best = Some((k, score, table));
        }
    }
    let (best_k, _, table) = best.expect("k_values not empty");
    Ok(SweepResult {
        best_k,
        table,
        arps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(tag: &str, topic: &str, docs: &[&str]) -> Run {
        let n = docs.len();
        Run::from_topics(
            tag,
            [(
                topic.to_string(),
                docs.iter()
                    .enumerate()
                    .map(|(i, d)| RankedDoc::new(*d, (n - i) as f64))
                    .collect(),
            )],
        )
        .unwrap()
    }

    #[test]
    fn rank_one_in_both() {
        let a = run("a", "q", &["x", "y"]);
        let b = run("b", "q", &["x", "z"]);
        let f = rrf_fuse(&[a, b], &FusionConfig::default()).unwrap();
        let docs = f.ranking("q").unwrap();
        assert_eq!(docs[0].doc_id, "x");
        assert!((docs[0].score - 2.0 / 61.0).abs() < 1e-15);
        // y and z each appear once, at rank 2
        assert!((docs[1].score - 1.0 / 62.0).abs() < 1e-15);
    }

    #[test]
    fn single_run_contribution() {
        let a = run("a", "q", &["x"]);
        let b = run("b", "r", &["y"]);
        let f = rrf_fuse(&[a, b], &FusionConfig::default()).unwrap();
        assert!((f.ranking("q").unwrap()[0].score - 1.0 / 61.0).abs() < 1e-15);
        assert_eq!(f.num_topics(), 2);
    }

    #[test]
    fn self_fusion_keeps_order() {
        let a = run("a", "q", &["d3", "d1", "d2", "d0"]);
        let f = rrf_fuse(&[a.clone(), a.clone()], &FusionConfig::default()).unwrap();
        assert_eq!(f.doc_ids("q"), a.doc_ids("q"));
    }

    #[test]
    fn too_few_runs_and_bad_config() {
        let a = run("a", "q", &["x"]);
        assert!(rrf_fuse(std::slice::from_ref(&a), &FusionConfig::default()).is_err());
        let bad = FusionConfig { k: 0.0, ..Default::default() };
        assert!(rrf_fuse(&[a.clone(), a.clone()], &bad).is_err());
        let bad = FusionConfig { depth: 0, ..Default::default() };
        assert!(rrf_fuse(&[a.clone(), a], &bad).is_err());
    }

    #[test]
    fn depth_truncates() {
        let a = run("a", "q", &["a", "b", "c"]);
        let b = run("b", "q", &["d", "e"]);
        let cfg = FusionConfig { depth: 2, ..Default::default() };
        assert_eq!(rrf_fuse(&[a, b], &cfg).unwrap().ranking("q").unwrap().len(), 2);
    }

    #[test]
    fn sweep_single_and_ties() {
        let a = run("a", "q", &["x", "y"]);
        let b = run("b", "q", &["x", "z"]);
        let qrels: Qrels = [("q", "x", 1)].into_iter().collect();
        let runs = [a, b];
        let cfg = FusionConfig::default();
        let one = rrf_sweep(&runs, &qrels, MeasureId::RR, &[35.0], &cfg).unwrap();
        assert_eq!(one.best_k, 35.0);
        // x is first at every k, so all ARPs tie
        let tie = rrf_sweep(&runs, &qrels, MeasureId::RR, &[50.0, 20.0, 90.0], &cfg).unwrap();
        assert_eq!(tie.best_k, 20.0);
        assert!(rrf_sweep(&runs, &qrels, MeasureId::RR, &[], &cfg).is_err());
    }

    #[test]
    fn default_grid() {
        assert_eq!(default_k_grid(), [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0]);
    }
}
