use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::measure::MeasureId;
use super::measures::score_topic;
use crate::error::{Error, Result};
use crate::numeric;
use crate::report::{fmt_value, round_to, TextTable};
use crate::trec::{Qrels, Run};

/// Per-topic scores of one run in one evaluation environment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub run_tag: String,
    pub ee_label: String,
    measures: Vec<MeasureId>,
    evaluated_topics: Vec<String>,
    scores: BTreeMap<MeasureId, BTreeMap<String, f64>>,
}

impl ScoreTable {
    /// Builds a table from explicit `(measure, topic, score)` cells.
    ///
    /// Every measure must have a score for every topic, and every score must
    /// lie in `[0, 1]`.
    pub fn from_scores<T: Into<String>>(
        run_tag: impl Into<String>,
        ee_label: impl Into<String>,
        cells: impl IntoIterator<Item = (MeasureId, T, f64)>,
    ) -> Result<Self> {
        let mut measures = Vec::new();
        let mut scores: BTreeMap<MeasureId, BTreeMap<String, f64>> = BTreeMap::new();
        let mut topics = BTreeSet::new();
        for (m, t, v) in cells {
            let t = t.into();
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "score {v} for {m}/{t} outside [0, 1]"
                )));
            }
            if !measures.contains(&m) {
                measures.push(m);
            }
            topics.insert(t.clone());
            scores.entry(m).or_default().insert(t, v);
        }
        for (m, per_topic) in &scores {
            if let Some(t) = topics.iter().find(|t| !per_topic.contains_key(*t)) {
                return Err(Error::InvalidArgument(format!("no {m} score for topic {t}")));
            }
        }
        Ok(Self {
            run_tag: run_tag.into(),
            ee_label: ee_label.into(),
            measures,
            evaluated_topics: topics.into_iter().collect(),
            scores,
        })
    }

    pub fn with_ee_label(mut self, ee_label: impl Into<String>) -> Self {
        self.ee_label = ee_label.into();
        self
    }

    pub fn measures(&self) -> &[MeasureId] {
        &self.measures
    }

    /// Topics of the qrels the run was evaluated against, sorted.
    pub fn evaluated_topics(&self) -> &[String] {
        &self.evaluated_topics
    }

    pub fn has_topic(&self, topic: &str) -> bool {
        self.evaluated_topics
            .binary_search_by(|t| t.as_str().cmp(topic))
            .is_ok()
    }

    pub fn score(&self, measure: MeasureId, topic: &str) -> Option<f64> {
        self.scores.get(&measure)?.get(topic).copied()
    }

    pub fn topic_scores(&self, measure: MeasureId) -> Option<&BTreeMap<String, f64>> {
        self.scores.get(&measure)
    }

    fn label(&self) -> String {
        if self.ee_label.is_empty() {
            self.run_tag.clone()
        } else {
            format!("{}@{}", self.run_tag, self.ee_label)
        }
    }

    /// Scores for `topics`, in that order.
    pub fn scores_for<S: AsRef<str>>(&self, measure: MeasureId, topics: &[S]) -> Result<Vec<f64>> {
        let per_topic = self.scores.get(&measure).ok_or_else(|| {
            Error::InvalidArgument(format!("measure {measure} not evaluated for {}", self.label()))
        })?;
        topics
            .iter()
            .map(|t| {
                per_topic
                    .get(t.as_ref())
                    .copied()
                    .ok_or_else(|| Error::MissingTopic {
                        topic: t.as_ref().to_string(),
                        table: self.label(),
                    })
            })
            .collect()
    }

    /// Long format: `measure, topic, score` rows followed by one `all` row
    /// per measure holding the ARP.
    pub fn to_text_table(&self, precision: usize) -> TextTable {
        let mut t = TextTable::new(["measure", "topic", "score"]);
        for &m in &self.measures {
            for topic in &self.evaluated_topics {
                let v = self.score(m, topic).unwrap_or_default();
                t.push([m.to_string(), topic.clone(), fmt_value(v, precision)]);
            }
        }
        for &m in &self.measures {
            let v = arp(self, m, None).unwrap_or_default();
            t.push([m.to_string(), "all".to_string(), fmt_value(v, precision)]);
        }
        t
    }

    pub fn to_json(&self, precision: usize) -> serde_json::Value {
        #[derive(Serialize)]
        struct View<'a> {
            run_tag: &'a str,
            ee_label: &'a str,
            measures: Vec<String>,
            evaluated_topics: &'a [String],
            scores: BTreeMap<String, BTreeMap<&'a str, f64>>,
            arp: BTreeMap<String, f64>,
        }
        let view = View {
            run_tag: &self.run_tag,
            ee_label: &self.ee_label,
            measures: self.measures.iter().map(ToString::to_string).collect(),
            evaluated_topics: &self.evaluated_topics,
            scores: self
                .measures
                .iter()
                .map(|m| {
                    let per_topic = self.scores[m]
                        .iter()
                        .map(|(t, &v)| (t.as_str(), round_to(v, precision)))
                        .collect();
                    (m.to_string(), per_topic)
                })
                .collect(),
            arp: self
                .measures
                .iter()
                .map(|&m| (m.to_string(), round_to(arp(self, m, None).unwrap_or_default(), precision)))
                .collect(),
        };
        serde_json::to_value(view).expect("score table serializes")
    }
}

/// Scores `run` against `qrels` on every qrels topic.
///
/// Topics missing from the run score 0; run topics without qrels are ignored.
pub fn evaluate(run: &Run, qrels: &Qrels, measures: &[MeasureId]) -> Result<ScoreTable> {
    if qrels.is_empty() {
        return Err(Error::EmptyInput("qrels contain no topics".into()));
    }
    if measures.is_empty() {
        return Err(Error::InvalidArgument("no measures requested".into()));
    }
    let mut unique = Vec::new();
    for &m in measures {
        if !unique.contains(&m) {
            unique.push(m);
        }
    }

    let mut scores: BTreeMap<MeasureId, BTreeMap<String, f64>> = BTreeMap::new();
    for (topic, judgments) in qrels.topics() {
        let ranking = run.doc_ids(topic);
        for &m in &unique {
            scores
                .entry(m)
                .or_default()
                .insert(topic.to_string(), score_topic(m, &ranking, judgments));
        }
    }
    Ok(ScoreTable {
        run_tag: run.tag.clone(),
        ee_label: String::new(),
        measures: unique,
        evaluated_topics: qrels.topic_ids().map(str::to_string).collect(),
        scores,
    })
}

/// Average retrieval performance: mean per-topic score over the evaluated
/// topics, or over `subset` when given.
pub fn arp(table: &ScoreTable, measure: MeasureId, subset: Option<&[String]>) -> Result<f64> {
    let topics = subset.unwrap_or(&table.evaluated_topics);
    if topics.is_empty() {
        return Err(Error::EmptyInput("no topics to average over".into()));
    }
    let values = table.scores_for(measure, topics)?;
    Ok(numeric::mean_sorted(&values).expect("non-empty"))
}
