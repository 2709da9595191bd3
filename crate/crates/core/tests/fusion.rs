mod common;

use std::collections::BTreeMap;

use common::{oracle, random_run};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempeval::fusion::{default_k_grid, rrf_fuse, rrf_sweep, FusionConfig};
use tempeval::metrics::MeasureId;
use tempeval::trec::{Qrels, Run};

/// RRF scores computed directly from the definition.
fn reference_fuse(runs: &[&Run], k: f64) -> BTreeMap<String, BTreeMap<String, f64>> {
    let mut out: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for run in runs {
        for (topic, docs) in run.topics() {
            for (i, d) in docs.iter().enumerate() {
                *out.entry(topic.to_string())
                    .or_default()
                    .entry(d.doc_id.clone())
                    .or_default() += 1.0 / (k + i as f64 + 1.0);
            }
        }
    }
    out
}

fn ranked(scores: &BTreeMap<String, f64>) -> Vec<String> {
    let mut v: Vec<_> = scores.iter().collect();
    v.sort_by(|a, b| b.1.total_cmp(a.1).then_with(|| b.0.cmp(a.0)));
    v.into_iter().map(|(d, _)| d.clone()).collect()
}

#[test]
fn fused_scores_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let runs: Vec<Run> = (0..rng.gen_range(2..5))
            .map(|i| random_run(&mut rng, &format!("r{i}"), 4, 30))
            .collect();
        let k = rng.gen_range(1.0..100.0);
        let cfg = FusionConfig { k, ..Default::default() };
        let fused = rrf_fuse(&runs, &cfg).unwrap();
        let want = reference_fuse(&runs.iter().collect::<Vec<_>>(), k);
        for (topic, docs) in fused.topics() {
            let w = &want[topic];
            assert_eq!(docs.len(), w.len());
            for d in docs {
                assert!((d.score - w[&d.doc_id]).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn self_fusion_preserves_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let run = random_run(&mut rng, "r", 5, 40);
        let fused = rrf_fuse(&[run.clone(), run.clone()], &FusionConfig::default()).unwrap();
        for topic in run.topic_ids() {
            assert_eq!(fused.doc_ids(topic), run.doc_ids(topic));
        }
    }
}

#[test]
fn promoting_a_document_never_lowers_its_fused_score() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let a = random_run(&mut rng, "a", 1, 20);
        let b = random_run(&mut rng, "b", 1, 20);
        let docs = a.doc_ids("t0");
        if docs.len() < 2 {
            continue;
        }
        let j = rng.gen_range(1..docs.len());
        let target = docs[j].to_string();
        // rebuild `a` with the target moved to the top
        let mut order: Vec<String> = docs.iter().map(|s| s.to_string()).collect();
        let moved = order.remove(j);
        order.insert(0, moved);
        let promoted = common::run_from_rankings("a", &[("t0".into(), order)]);
        let cfg = FusionConfig::default();
        let score = |run: &Run| {
            rrf_fuse(&[run.clone(), b.clone()], &cfg)
                .unwrap()
                .ranking("t0")
                .unwrap()
                .iter()
                .find(|d| d.doc_id == target)
                .unwrap()
                .score
        };
        assert!(score(&promoted) >= score(&a));
    }
}

#[test]
fn sweep_matches_reference_selection() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let runs: Vec<Run> = (0..3).map(|i| random_run(&mut rng, &format!("r{i}"), 6, 25)).collect();
    let mut qrels = Qrels::new();
    for t in 0..6 {
        for d in 0..25 {
            if rng.gen_bool(0.5) {
                qrels.insert(format!("t{t}"), format!("doc{d}"), rng.gen_range(0..=2));
            }
        }
    }
    let measure = MeasureId::ndcg_at(10).unwrap();
    let grid = default_k_grid();
    let result = rrf_sweep(&runs, &qrels, measure, &grid, &FusionConfig::default()).unwrap();

    let refs: Vec<&Run> = runs.iter().collect();
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &k in &grid {
        let fused = reference_fuse(&refs, k);
        let mut total = 0.0;
        for (topic, judged) in qrels.topics() {
            let ranking = fused.get(topic).map(ranked).unwrap_or_default();
            total += oracle::ndcg(&ranking, judged, Some(10));
        }
        let arp = total / qrels.num_topics() as f64;
        let (_, got) = result.arps.iter().find(|(x, _)| *x == k).copied().unwrap();
        assert!((got - arp).abs() < 1e-12, "k={k}: {got} vs {arp}");
        if arp > best.1 + 1e-12 {
            best = (k, arp);
        }
    }
    assert_eq!(result.best_k, best.0);
}

#[test]
fn fewer_than_two_runs_is_rejected() {
    let run = random_run(&mut ChaCha8Rng::seed_from_u64(1), "a", 1, 3);
    assert!(rrf_fuse(&[run], &FusionConfig::default()).is_err());
}
