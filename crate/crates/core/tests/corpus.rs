use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempeval::corpus::{collection_stats, diff_corpora, normalize_url, qrels_distribution, EvolutionStats};
use tempeval::trec::{CorpusManifest, DocRecord, LengthUnit, Qrels, QuerySet};

fn manifest(label: &str, docs: &BTreeMap<String, u64>) -> CorpusManifest {
    let records = docs
        .iter()
        .enumerate()
        .map(|(i, (url, len))| DocRecord {
            doc_id: format!("{label}-{i}"),
            url: url.clone(),
            length: *len,
        })
        .collect();
    CorpusManifest::new(label, LengthUnit::Chars, records).unwrap()
}

fn random_snapshots(rng: &mut ChaCha8Rng) -> (BTreeMap<String, u64>, BTreeMap<String, u64>) {
    let mut old = BTreeMap::new();
    let mut new = BTreeMap::new();
    for i in 0..1000 {
        let url = format!("https://site{}.example/page/{i}", i % 37);
        match rng.gen_range(0..4) {
            0 => {
                old.insert(url, rng.gen_range(0..50));
            }
            1 => {
                new.insert(url, rng.gen_range(0..50));
            }
            _ => {
                old.insert(url.clone(), rng.gen_range(0..50));
                new.insert(url, rng.gen_range(0..50));
            }
        }
    }
    (old, new)
}

#[test]
fn diff_matches_set_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..20 {
        let (old, new) = random_snapshots(&mut rng);
        let (stats, warnings) = diff_corpora(&manifest("old", &old), &manifest("new", &new));
        assert!(warnings.is_empty());
        let common: Vec<&String> = old.keys().filter(|u| new.contains_key(*u)).collect();
        let want = EvolutionStats {
            added: new.keys().filter(|u| !old.contains_key(*u)).count(),
            removed: old.keys().filter(|u| !new.contains_key(*u)).count(),
            increased: common.iter().filter(|u| new[**u] > old[**u]).count(),
            decreased: common.iter().filter(|u| new[**u] < old[**u]).count(),
            unchanged: common.iter().filter(|u| new[**u] == old[**u]).count(),
            matched_urls: common.len(),
        };
        assert_eq!(stats, want);
    }
}

#[test]
fn diff_is_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2000);
    for _ in 0..20 {
        let (old, new) = random_snapshots(&mut rng);
        let (a, b) = (manifest("old", &old), manifest("new", &new));
        let (fwd, _) = diff_corpora(&a, &b);
        let (back, _) = diff_corpora(&b, &a);
        assert_eq!(fwd.added, back.removed);
        assert_eq!(fwd.removed, back.added);
        assert_eq!(fwd.increased, back.decreased);
        assert_eq!(fwd.decreased, back.increased);
        assert_eq!(fwd.unchanged, back.unchanged);
        assert_eq!(fwd.matched_urls, fwd.increased + fwd.decreased + fwd.unchanged);
    }
}

#[test]
fn identical_snapshots_are_unchanged() {
    let (old, _) = random_snapshots(&mut ChaCha8Rng::seed_from_u64(3));
    let m = manifest("x", &old);
    let (stats, _) = diff_corpora(&m, &m);
    assert_eq!(stats.unchanged, old.len());
    assert_eq!(stats.matched_urls, old.len());
    assert_eq!(stats.added + stats.removed + stats.increased + stats.decreased, 0);
}

#[test]
fn url_variants_collapse_to_longest() {
    let old = CorpusManifest::new(
        "old",
        LengthUnit::Chars,
        vec![
            DocRecord { doc_id: "a".into(), url: "HTTP://Example.org/Path/".into(), length: 5 },
            DocRecord { doc_id: "b".into(), url: "http://example.org/Path".into(), length: 9 },
        ],
    )
    .unwrap();
    let new = CorpusManifest::new(
        "new",
        LengthUnit::Chars,
        vec![DocRecord { doc_id: "c".into(), url: "http://EXAMPLE.org/Path//".into(), length: 9 }],
    )
    .unwrap();
    assert_eq!(normalize_url("HTTP://Example.org/Path/"), "http://example.org/Path");
    let (stats, warnings) = diff_corpora(&old, &new);
    assert_eq!(stats.unchanged, 1);
    assert_eq!(stats.matched_urls, 1);
    assert_eq!(warnings.len(), 1);
}

#[test]
fn stats_and_distribution() {
    let m = CorpusManifest::new(
        "WT",
        LengthUnit::Tokens,
        vec![
            DocRecord { doc_id: "a".into(), url: "u1".into(), length: 10 },
            DocRecord { doc_id: "b".into(), url: "u2".into(), length: 30 },
        ],
    )
    .unwrap();
    let q = QuerySet::from_pairs("WT", [("1", "one two"), ("2", "one two three four"), ("3", "x")]);
    let excluded = ["3".to_string()].into_iter().collect();
    let stats = collection_stats(&m, &q, &excluded);
    assert_eq!(stats.doc_count, 2);
    assert_eq!(stats.doc_length.mean, 20.0);
    assert_eq!(stats.query_count, 3);
    assert_eq!(stats.query_length.mean, 3.0);

    let qrels: Qrels = [("1", "a", 0), ("1", "b", 2), ("2", "a", 0)].into_iter().collect();
    let dist = qrels_distribution(&qrels).unwrap();
    assert_eq!(dist.topics_without_relevant, 1);
    assert_eq!(dist.overall.mean, 1.5);
    assert_eq!(dist.per_grade[&0].mean, 1.0);
    assert_eq!(dist.per_grade[&2].max, 1.0);
}
