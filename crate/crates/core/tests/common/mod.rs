//! Shared helpers for integration tests: a from-definition reference
//! implementation of the measures and random instance generators.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use tempeval::trec::{Qrels, RankedDoc, Run};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Reference measures, computed directly from their textbook definitions with
/// no shared code paths. `judged` maps doc id to grade.
pub mod oracle {
    use std::collections::BTreeMap;

    fn rel(judged: &BTreeMap<String, u32>, doc: &str) -> bool {
        matches!(judged.get(doc), Some(g) if *g >= 1)
    }

    pub fn precision(ranking: &[String], judged: &BTreeMap<String, u32>, k: usize) -> f64 {
        let mut hits = 0.0;
        for i in 0..k {
            if i < ranking.len() && rel(judged, &ranking[i]) {
                hits += 1.0;
            }
        }
        hits / k as f64
    }

    pub fn average_precision(ranking: &[String], judged: &BTreeMap<String, u32>) -> f64 {
        let total_rel = judged.values().filter(|g| **g >= 1).count();
        if total_rel == 0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..ranking.len() {
            if rel(judged, &ranking[i]) {
                let above = ranking[..=i].iter().filter(|d| rel(judged, d)).count();
                acc += above as f64 / (i + 1) as f64;
            }
        }
        acc / total_rel as f64
    }

    pub fn reciprocal_rank(ranking: &[String], judged: &BTreeMap<String, u32>) -> f64 {
        for (i, d) in ranking.iter().enumerate() {
            if rel(judged, d) {
                return 1.0 / (i as f64 + 1.0);
            }
        }
        0.0
    }

    fn dcg(gains: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, g) in gains.iter().enumerate() {
            s += g / (i as f64 + 2.0).log2();
        }
        s
    }

    pub fn ndcg(ranking: &[String], judged: &BTreeMap<String, u32>, cutoff: Option<usize>) -> f64 {
        let depth = cutoff.unwrap_or(usize::MAX);
        let gains: Vec<f64> = ranking
            .iter()
            .take(depth)
            .map(|d| judged.get(d).copied().unwrap_or(0) as f64)
            .collect();
        // ideal: repeatedly pick the largest remaining grade
        let mut pool: Vec<u32> = judged.values().copied().collect();
        let mut ideal = Vec::new();
        while !pool.is_empty() && ideal.len() < depth {
            let (idx, _) = pool.iter().enumerate().max_by_key(|(_, g)| **g).unwrap();
            ideal.push(pool.remove(idx) as f64);
        }
        let best = dcg(&ideal);
        if best == 0.0 {
            0.0
        } else {
            dcg(&gains) / best
        }
    }

    pub fn bpref(ranking: &[String], judged: &BTreeMap<String, u32>) -> f64 {
        let r = judged.values().filter(|g| **g >= 1).count();
        let n = judged.values().filter(|g| **g == 0).count();
        if r == 0 {
            return 0.0;
        }
        let bound = r.min(n) as f64;
        let mut acc = 0.0;
        for i in 0..ranking.len() {
            if rel(judged, &ranking[i]) {
                let nonrel_above = ranking[..i]
                    .iter()
                    .filter(|d| judged.get(*d) == Some(&0))
                    .count() as f64;
                acc += if n == 0 {
                    1.0
                } else {
                    1.0 - nonrel_above.min(bound) / bound
                };
            }
        }
        acc / r as f64
    }
}

/// A random topic: a pool of at most `max_docs` docs, some judged with grades
/// in {0, 1, 2}, and a ranking over a random subset of the pool.
pub struct Instance {
    pub ranking: Vec<String>,
    pub judged: BTreeMap<String, u32>,
}

pub fn random_instance<R: Rng>(rng: &mut R, max_docs: usize) -> Instance {
    let pool = rng.gen_range(1..=max_docs);
    let docs: Vec<String> = (0..pool).map(|i| format!("d{i:02}")).collect();
    let mut judged = BTreeMap::new();
    for d in &docs {
        if rng.gen_bool(0.7) {
            judged.insert(d.clone(), rng.gen_range(0..=2));
        }
    }
    let mut ranking = docs.clone();
    ranking.shuffle(rng);
    ranking.truncate(rng.gen_range(0..=pool));
    Instance { ranking, judged }
}

/// A run whose canonical order for `topic` is exactly `ranking`.
pub fn run_from_rankings(tag: &str, rankings: &[(String, Vec<String>)]) -> Run {
    Run::from_topics(
        tag,
        rankings.iter().map(|(topic, docs)| {
            let n = docs.len();
            (
                topic.clone(),
                docs.iter()
                    .enumerate()
                    .map(|(i, d)| RankedDoc::new(d.clone(), (n - i) as f64))
                    .collect(),
            )
        }),
    )
    .unwrap()
}

pub fn qrels_from(topics: &[(String, BTreeMap<String, u32>)]) -> Qrels {
    let mut q = Qrels::new();
    for (t, judged) in topics {
        for (d, g) in judged {
            q.insert(t.clone(), d.clone(), *g);
        }
    }
    q
}

/// A random run over `topics` topics drawing from a shared doc pool, with
/// random (possibly tied) scores.
pub fn random_run<R: Rng>(rng: &mut R, tag: &str, topics: usize, max_docs: usize) -> Run {
    Run::from_topics(
        tag,
        (0..topics).map(|t| {
            let mut docs: Vec<usize> = (0..max_docs).collect();
            docs.shuffle(rng);
            docs.truncate(rng.gen_range(1..=max_docs));
            (
                format!("t{t}"),
                docs.into_iter()
                    .map(|d| RankedDoc::new(format!("doc{d}"), f64::from(rng.gen_range(0..8u8)) / 4.0))
                    .collect(),
            )
        }),
    )
    .unwrap()
}

/// A score table with random values for `measures` over `topics`.
pub fn random_table<R: Rng>(
    rng: &mut R,
    tag: &str,
    ee: &str,
    measures: &[tempeval::metrics::MeasureId],
    topics: &[String],
) -> tempeval::metrics::ScoreTable {
    let cells: Vec<_> = measures
        .iter()
        .flat_map(|&m| topics.iter().map(move |t| (m, t.clone())))
        .map(|(m, t)| (m, t, rng.gen_range(0.0..=1.0)))
        .collect();
    tempeval::metrics::ScoreTable::from_scores(tag, ee, cells).unwrap()
}

pub fn topic_ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}
