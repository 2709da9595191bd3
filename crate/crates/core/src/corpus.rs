//! Corpus evolution between snapshots, collection statistics and the
//! distribution of judgments per topic.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric;
use crate::trec::{CorpusManifest, Grade, LengthUnit, Qrels, QuerySet};

/// Lowercases scheme and host and strips trailing slashes.
pub fn normalize_url(url: &str) -> String {
    let url = url.trim();
    let normalized = match url.find("://") {
        Some(scheme_end) => {
            let rest = &url[scheme_end + 3..];
            let host_end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
            format!(
                "{}://{}{}",
                url[..scheme_end].to_ascii_lowercase(),
                rest[..host_end].to_ascii_lowercase(),
                &rest[host_end..]
            )
        }
        None => url.to_string(),
    };
    normalized.trim_end_matches('/').to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EvolutionStats {
    pub added: usize,
    pub removed: usize,
    pub increased: usize,
    pub decreased: usize,
    pub unchanged: usize,
    pub matched_urls: usize,
}

/// URL -> length, keeping the longest record when a URL repeats.
fn by_url(manifest: &CorpusManifest, warnings: &mut Vec<String>) -> HashMap<String, u64> {
    let mut map: HashMap<String, u64> = HashMap::with_capacity(manifest.len());
    let mut repeated = BTreeSet::new();
    for r in &manifest.records {
        let url = normalize_url(&r.url);
        map.entry(url.clone())
            .and_modify(|len| {
                repeated.insert(url.clone());
                *len = (*len).max(r.length);
            })
            .or_insert(r.length);
    }
    if !repeated.is_empty() {
        warnings.push(format!(
            "{}: {} URLs occur more than once; kept the longest record for each",
            manifest.ee_label,
            repeated.len()
        ));
    }
    map
}

/// Joins two snapshots on normalized URL and classifies every document.
pub fn diff_corpora(old: &CorpusManifest, new: &CorpusManifest) -> (EvolutionStats, Vec<String>) {
    let mut warnings = Vec::new();
    if old.unit != new.unit {
        warnings.push(format!(
            "comparing lengths in different units ({:?} vs {:?})",
            old.unit, new.unit
        ));
    }
    let old_map = by_url(old, &mut warnings);
    let new_map = by_url(new, &mut warnings);
    let mut stats = EvolutionStats::default();
    for (url, &old_len) in &old_map {
        match new_map.get(url) {
            Some(&new_len) => {
                stats.matched_urls += 1;
                match new_len.cmp(&old_len) {
                    std::cmp::Ordering::Greater => stats.increased += 1,
                    std::cmp::Ordering::Less => stats.decreased += 1,
                    std::cmp::Ordering::Equal => stats.unchanged += 1,
                }
            }
            None => stats.removed += 1,
        }
    }
    stats.added = new_map.len() - stats.matched_urls;
    (stats, warnings)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// All zeros for an empty input.
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        Self {
            mean: numeric::mean_sorted(values).unwrap_or_default(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Number of maximal non-whitespace runs.
pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollectionStats {
    pub doc_count: usize,
    /// Document lengths in `doc_length_unit`, as recorded in the manifest.
    pub doc_length: Summary,
    pub doc_length_unit: LengthUnit,
    /// Every query in the set, excluded ones included.
    pub query_count: usize,
    /// Whitespace-token lengths of the non-excluded queries.
    pub query_length: Summary,
    pub excluded_queries: usize,
}

pub fn collection_stats(
    manifest: &CorpusManifest,
    queries: &QuerySet,
    exclusions: &BTreeSet<String>,
) -> CollectionStats {
    let doc_lengths: Vec<f64> = manifest.records.iter().map(|r| r.length as f64).collect();
    let mut excluded = 0;
    let mut query_lengths = Vec::new();
    for (topic, text) in &queries.queries {
        if exclusions.contains(topic) {
            excluded += 1;
        } else {
            query_lengths.push(token_count(text) as f64);
        }
    }
    CollectionStats {
        doc_count: manifest.len(),
        doc_length: Summary::of(&doc_lengths),
        doc_length_unit: manifest.unit,
        query_count: queries.len(),
        query_length: Summary::of(&query_lengths),
        excluded_queries: excluded,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicGrades {
    pub counts: BTreeMap<Grade, usize>,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QrelsDistribution {
    pub per_topic: BTreeMap<String, TopicGrades>,
    /// Per-grade count statistics across topics; topics lacking a grade count as 0.
    pub per_grade: BTreeMap<Grade, Summary>,
    pub overall: Summary,
    /// Topics without any judgment of grade >= 1.
    pub topics_without_relevant: usize,
}

pub fn qrels_distribution(qrels: &Qrels) -> Result<QrelsDistribution> {
    if qrels.is_empty() {
        return Err(Error::EmptyInput("qrels contain no topics".into()));
    }
    let mut per_topic = BTreeMap::new();
    let mut grades = BTreeSet::new();
    for (topic, judgments) in qrels.topics() {
        let mut counts: BTreeMap<Grade, usize> = BTreeMap::new();
        for &g in judgments.values() {
            *counts.entry(g).or_default() += 1;
            grades.insert(g);
        }
        per_topic.insert(topic.to_string(), TopicGrades {
            counts,
            total: judgments.len(),
        });
    }
    let per_grade = grades
        .into_iter()
        .map(|g| {
            let v: Vec<f64> = per_topic
                .values()
                .map(|t: &TopicGrades| t.counts.get(&g).copied().unwrap_or(0) as f64)
                .collect();
            (g, Summary::of(&v))
        })
        .collect();
    let totals: Vec<f64> = per_topic.values().map(|t| t.total as f64).collect();
    let topics_without_relevant = per_topic
        .values()
        .filter(|t| t.counts.range(1..).all(|(_, &c)| c == 0))
        .count();
    Ok(QrelsDistribution {
        per_topic,
        per_grade,
        overall: Summary::of(&totals),
        topics_without_relevant,
    })
}
