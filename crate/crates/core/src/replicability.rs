//! Temporal persistence measures between two evaluation environments (EEs):
//! result deltas, per-topic improvements over a pivot system, effect ratio,
//! relative improvement and its delta, plus topic harmonization.
//!
//! Sign conventions: result deltas and topic drift are EE1 minus EE2;
//! per-topic improvements are system minus pivot.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metrics::{arp, MeasureId, ScoreTable};
use crate::numeric;
use crate::report::{fmt_opt, fmt_value, round_to, TextTable, UNDEF};
use crate::significance::{paired_ttest, unpaired_ttest, TTestVariant};
use crate::trec::QuerySet;

/// Difference of two ARP values, EE1 minus EE2.
pub fn result_delta(arp_ee1: f64, arp_ee2: f64) -> f64 {
    arp_ee1 - arp_ee2
}

/// Per-topic improvements `M_j(S) - M_j(P)` of one measure in one EE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaVector {
    pub measure: MeasureId,
    pub topics: Vec<String>,
    pub values: Vec<f64>,
}

impl DeltaVector {
    pub fn mean(&self) -> Option<f64> {
        numeric::mean_sorted(&self.values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The same topics with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> DeltaVector {
        DeltaVector {
            measure: self.measure,
            topics: self.topics.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

pub fn per_topic_deltas(
    system: &ScoreTable,
    pivot: &ScoreTable,
    core_topics: &[String],
    measure: MeasureId,
) -> Result<DeltaVector> {
    let s = system.scores_for(measure, core_topics)?;
    let p = pivot.scores_for(measure, core_topics)?;
    Ok(DeltaVector {
        measure,
        topics: core_topics.to_vec(),
        values: s.iter().zip(&p).map(|(s, p)| s - p).collect(),
    })
}

/// Mean improvement in EE2 over mean improvement in EE1.
///
/// `None` when the EE1 mean is zero or either vector is empty.
pub fn effect_ratio(deltas_ee2: &DeltaVector, deltas_ee1: &DeltaVector) -> Option<f64> {
    let denom = deltas_ee1.mean()?;
    let num = deltas_ee2.mean()?;
    if denom == 0.0 {
        return None;
    }
    Some(num / denom)
}

/// `(mean S - mean P) / mean P` over the core topics; `None` if mean P is zero.
pub fn relative_improvement(
    system: &ScoreTable,
    pivot: &ScoreTable,
    core_topics: &[String],
    measure: MeasureId,
) -> Result<Option<f64>> {
    let s = arp(system, measure, Some(core_topics))?;
    let p = arp(pivot, measure, Some(core_topics))?;
    if p == 0.0 {
        return Ok(None);
    }
    Ok(Some((s - p) / p))
}

pub fn delta_ri(ri: Option<f64>, ri_prime: Option<f64>) -> Option<f64> {
    Some(ri? - ri_prime?)
}

/// Outcome of one system-vs-baseline paired test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceResult {
    pub run_tag: String,
    pub p_value: f64,
    pub significant: bool,
}

/// Paired two-sided t-tests of each system against `baseline`, flagged
/// significant when `p < alpha / m`.
///
/// `m` defaults to the number of systems tested.
pub fn paired_ttest_bonferroni(
    systems: &[ScoreTable],
    baseline: &ScoreTable,
    measure: MeasureId,
    alpha: f64,
    family_size: Option<usize>,
) -> Result<Vec<SignificanceResult>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let m = family_size.unwrap_or(systems.len());
    if m == 0 {
        return Ok(Vec::new());
    }
    let threshold = alpha / m as f64;
    let topics = baseline.evaluated_topics();
    let base = baseline.scores_for(measure, topics)?;
    systems
        .iter()
        .map(|sys| {
            if sys.evaluated_topics() != topics {
                return Err(Error::InvalidArgument(format!(
                    "{} and baseline {} were evaluated on different topic sets",
                    sys.run_tag, baseline.run_tag
                )));
            }
            let p = paired_ttest(&sys.scores_for(measure, topics)?, &base)?;
            Ok(SignificanceResult {
                run_tag: sys.run_tag.clone(),
                p_value: p,
                significant: p < threshold,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignMode {
    /// Topic ids shared by all sets.
    ById,
    /// Normalized query strings shared by all sets.
    #[default]
    ByText,
}

/// One core query and the topic id it has in each EE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedTopic {
    pub key: String,
    pub topic_ids: Vec<String>,
}

/// Topic ids dropped because another topic of the same EE has the same query text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscardedDuplicate {
    pub ee_label: String,
    pub key: String,
    pub kept: String,
    pub discarded: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicAlignment {
    pub mode: AlignMode,
    pub ee_labels: Vec<String>,
    pub rows: Vec<AlignedTopic>,
    pub discarded: Vec<DiscardedDuplicate>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl TopicAlignment {
    /// Topic ids of the EE at `index`, in alignment order.
    pub fn topics_for(&self, index: usize) -> Vec<String> {
        self.rows.iter().map(|r| r.topic_ids[index].clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Drops rows whose topic in any EE fails `keep(ee_index, topic_id)`.
    pub fn retain(&mut self, mut keep: impl FnMut(usize, &str) -> bool) {
        self.rows
            .retain(|r| r.topic_ids.iter().enumerate().all(|(i, t)| keep(i, t)));
    }

    pub fn to_text_table(&self) -> TextTable {
        let mut header = vec!["key".to_string()];
        header.extend(self.ee_labels.iter().cloned());
        let mut t = TextTable::new(header);
        for r in &self.rows {
            t.push(std::iter::once(r.key.clone()).chain(r.topic_ids.iter().cloned()));
        }
        t
    }
}

/// Lowercases and collapses whitespace runs into single spaces.
pub fn normalize_query(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Aligns topics present in every query set, ordered by key.
///
/// In text mode, a query string that maps to several topics of one EE keeps
/// the lexicographically smallest topic id; the others are reported in
/// [`TopicAlignment::discarded`]. Empty query strings never align.
pub fn core_topics(query_sets: &[QuerySet], mode: AlignMode) -> Result<TopicAlignment> {
    if query_sets.len() < 2 {
        return Err(Error::InvalidArgument("need at least two query sets to align".into()));
    }

    // key -> sorted topic ids, per EE
    let keyed: Vec<BTreeMap<String, Vec<String>>> = query_sets
        .iter()
        .map(|qs| {
            let mut by_key: BTreeMap<String, Vec<String>> = BTreeMap::new();
            for (topic, text) in &qs.queries {
                let key = match mode {
                    AlignMode::ById => topic.clone(),
                    AlignMode::ByText => normalize_query(text),
                };
                if !key.is_empty() {
                    by_key.entry(key).or_default().push(topic.clone());
                }
            }
            by_key
        })
        .collect();

    let mut rows = Vec::new();
    let mut discarded = Vec::new();
    let mut warnings = Vec::new();
    for (key, first_ids) in &keyed[0] {
        let per_ee: Option<Vec<&Vec<String>>> = std::iter::once(Some(first_ids))
            .chain(keyed[1..].iter().map(|m| m.get(key)))
            .collect();
        let Some(per_ee) = per_ee else { continue };
        let mut topic_ids = Vec::with_capacity(per_ee.len());
        for (ids, qs) in per_ee.iter().zip(query_sets) {
            // ids come from BTreeMap iteration, so they are already sorted
            let kept = ids[0].clone();
            if ids.len() > 1 {
                warnings.push(format!(
                    "{}: query {key:?} appears under {} topics, keeping {kept}",
                    qs.ee_label,
                    ids.len()
                ));
                discarded.push(DiscardedDuplicate {
                    ee_label: qs.ee_label.clone(),
                    key: key.clone(),
                    kept: kept.clone(),
                    discarded: ids[1..].to_vec(),
                });
            }
            topic_ids.push(kept);
        }
        rows.push(AlignedTopic {
            key: key.clone(),
            topic_ids,
        });
    }

    if rows.is_empty() {
        return Err(Error::EmptyResult("query sets share no core topics".into()));
    }
    Ok(TopicAlignment {
        mode,
        ee_labels: query_sets.iter().map(|q| q.ee_label.clone()).collect(),
        rows,
        discarded,
        warnings,
    })
}

/// Pivot and system score tables of one EE plus its core topics.
#[derive(Debug, Clone)]
pub struct EeSide {
    pub label: String,
    pub pivot: ScoreTable,
    pub system: ScoreTable,
    pub core_topics: Vec<String>,
}

/// Two EEs to compare. Core topic lists are aligned position by position
/// but may use different topic ids per EE.
#[derive(Debug, Clone)]
pub struct EePair {
    ee1: EeSide,
    ee2: EeSide,
}

impl EePair {
    pub fn new(ee1: EeSide, ee2: EeSide) -> Result<Self> {
        for side in [&ee1, &ee2] {
            if side.core_topics.is_empty() {
                return Err(Error::EmptyResult(format!("no core topics for {}", side.label)));
            }
            for table in [&side.pivot, &side.system] {
                if let Some(t) = side.core_topics.iter().find(|t| !table.has_topic(t)) {
                    return Err(Error::MissingTopic {
                        topic: t.clone(),
                        table: format!("{} ({})", table.run_tag, side.label),
                    });
                }
            }
        }
        Ok(Self { ee1, ee2 })
    }

    pub fn ee1(&self) -> &EeSide {
        &self.ee1
    }

    pub fn ee2(&self) -> &EeSide {
        &self.ee2
    }

    /// The same comparison with EE1 and EE2 exchanged.
    pub fn swapped(&self) -> EePair {
        EePair {
            ee1: self.ee2.clone(),
            ee2: self.ee1.clone(),
        }
    }

    fn system_is_pivot(&self, measure: MeasureId) -> Result<bool> {
        for side in [&self.ee1, &self.ee2] {
            let s = side.system.scores_for(measure, &side.core_topics)?;
            let p = side.pivot.scores_for(measure, &side.core_topics)?;
            if s != p {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn ser_undef<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str(UNDEF),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicabilityRow {
    pub measure: MeasureId,
    /// System ARP over the core topics of each EE.
    pub arp_ee1: f64,
    pub arp_ee2: f64,
    pub re_delta: f64,
    #[serde(serialize_with = "ser_undef")]
    pub er: Option<f64>,
    #[serde(serialize_with = "ser_undef")]
    pub ri: Option<f64>,
    #[serde(serialize_with = "ser_undef")]
    pub ri_prime: Option<f64>,
    #[serde(serialize_with = "ser_undef")]
    pub delta_ri: Option<f64>,
    pub p_unpaired: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicabilityReport {
    pub ee1_label: String,
    pub ee2_label: String,
    pub pivot_tag: String,
    pub system_tag: String,
    pub rows: Vec<ReplicabilityRow>,
}

impl ReplicabilityReport {
    /// True when no row has a defined ER or ΔRI.
    pub fn all_undefined(&self) -> bool {
        self.rows.iter().all(|r| r.er.is_none() && r.delta_ri.is_none())
    }

    pub fn row(&self, measure: MeasureId) -> Option<&ReplicabilityRow> {
        self.rows.iter().find(|r| r.measure == measure)
    }

    pub fn to_json(&self, precision: usize) -> serde_json::Value {
        let mut report = self.clone();
        for r in &mut report.rows {
            for v in [&mut r.arp_ee1, &mut r.arp_ee2, &mut r.re_delta, &mut r.p_unpaired] {
                *v = round_to(*v, precision);
            }
            for v in [&mut r.er, &mut r.ri, &mut r.ri_prime, &mut r.delta_ri] {
                *v = v.map(|x| round_to(x, precision));
            }
        }
        serde_json::to_value(report).expect("report serializes")
    }
}

/// Computes ReΔ, ER, RI, RI′, ΔRI and the unpaired p-value per measure.
///
/// A system whose core-topic scores equal the pivot's in both EEs gets the
/// identity row: ER = 1, ΔRI = 0, p = 1.
pub fn replicability_report(
    pair: &EePair,
    measures: &[MeasureId],
    variant: TTestVariant,
) -> Result<ReplicabilityReport> {
    let (e1, e2) = (pair.ee1(), pair.ee2());
    let rows = measures
        .iter()
        .map(|&m| {
            let arp_ee1 = arp(&e1.system, m, Some(&e1.core_topics))?;
            let arp_ee2 = arp(&e2.system, m, Some(&e2.core_topics))?;
            let ri = relative_improvement(&e1.system, &e1.pivot, &e1.core_topics, m)?;
            let ri_prime = relative_improvement(&e2.system, &e2.pivot, &e2.core_topics, m)?;
            let (er, delta, p) = if pair.system_is_pivot(m)? {
                (Some(1.0), Some(0.0), 1.0)
            } else {
                let d1 = per_topic_deltas(&e1.system, &e1.pivot, &e1.core_topics, m)?;
                let d2 = per_topic_deltas(&e2.system, &e2.pivot, &e2.core_topics, m)?;
                let s1 = e1.system.scores_for(m, &e1.core_topics)?;
                let s2 = e2.system.scores_for(m, &e2.core_topics)?;
                (
                    effect_ratio(&d2, &d1),
                    delta_ri(ri, ri_prime),
                    unpaired_ttest(&s1, &s2, variant)?,
                )
            };
            Ok(ReplicabilityRow {
                measure: m,
                arp_ee1,
                arp_ee2,
                re_delta: result_delta(arp_ee1, arp_ee2),
                er,
                ri,
                ri_prime,
                delta_ri: delta,
                p_unpaired: p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicabilityReport {
        ee1_label: e1.label.clone(),
        ee2_label: e2.label.clone(),
        pivot_tag: e1.pivot.run_tag.clone(),
        system_tag: e1.system.run_tag.clone(),
        rows,
    })
}

/// Table of several reports grouped by measure: ARP EE1, ARP EE2, ReΔ, ER,
/// ΔRI, p-value, then RI and RI′ when `with_ri` is set.
pub fn reports_table(reports: &[ReplicabilityReport], precision: usize, with_ri: bool) -> TextTable {
    let (l1, l2) = reports
        .first()
        .map(|r| (r.ee1_label.as_str(), r.ee2_label.as_str()))
        .unwrap_or(("EE1", "EE2"));
    let mut header = vec![
        "Measure".to_string(),
        "System".to_string(),
        format!("ARP {l1}"),
        format!("ARP {l2}"),
        format!("ReΔ {l1},{l2}"),
        "ER".to_string(),
        "ΔRI".to_string(),
        "p-val".to_string(),
    ];
    if with_ri {
        header.extend(["RI".to_string(), "RI'".to_string()]);
    }
    let mut table = TextTable::new(header);
    let mut measures: Vec<MeasureId> = Vec::new();
    for r in reports.iter().flat_map(|r| &r.rows) {
        if !measures.contains(&r.measure) {
            measures.push(r.measure);
        }
    }
    for m in measures {
        for rep in reports {
            let Some(r) = rep.row(m) else { continue };
            let mut cells = vec![
                m.to_string(),
                rep.system_tag.clone(),
                fmt_value(r.arp_ee1, precision),
                fmt_value(r.arp_ee2, precision),
                fmt_value(r.re_delta, precision),
                fmt_opt(r.er, precision),
                fmt_opt(r.delta_ri, precision),
                fmt_value(r.p_unpaired, precision),
            ];
            if with_ri {
                cells.push(fmt_opt(r.ri, precision));
                cells.push(fmt_opt(r.ri_prime, precision));
            }
            table.push(cells);
        }
    }
    table
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicDrift {
    pub topic_ee1: String,
    pub topic_ee2: String,
    pub delta: f64,
}

/// Per-topic `score_ee1 - score_ee2` over aligned core topics, largest first.
pub fn topic_drift(
    table_ee1: &ScoreTable,
    table_ee2: &ScoreTable,
    core_ee1: &[String],
    core_ee2: &[String],
    measure: MeasureId,
) -> Result<Vec<TopicDrift>> {
    if core_ee1.len() != core_ee2.len() {
        return Err(Error::InvalidArgument(format!(
            "core topic lists differ in length ({} vs {})",
            core_ee1.len(),
            core_ee2.len()
        )));
    }
    let a = table_ee1.scores_for(measure, core_ee1)?;
    let b = table_ee2.scores_for(measure, core_ee2)?;
    let mut drift: Vec<TopicDrift> = core_ee1
        .iter()
        .zip(core_ee2)
        .zip(a.iter().zip(&b))
        .map(|((t1, t2), (x, y))| TopicDrift {
            topic_ee1: t1.clone(),
            topic_ee2: t2.clone(),
            delta: x - y,
        })
        .collect();
    drift.sort_by(|x, y| {
        y.delta
            .total_cmp(&x.delta)
            .then_with(|| x.topic_ee1.cmp(&y.topic_ee1))
    });
    Ok(drift)
}
