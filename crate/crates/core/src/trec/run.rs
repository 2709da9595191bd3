use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::Parsed;
use crate::error::{Error, Result};

/// One retrieved document. Its rank is its 1-based position in the topic list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDoc {
    pub doc_id: String,
    pub score: f64,
    /// Rank field as it appeared in the source file, kept for diagnostics only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parsed_rank: Option<i64>,
}

impl RankedDoc {
    pub fn new(doc_id: impl Into<String>, score: f64) -> Self {
        Self {
            doc_id: doc_id.into(),
            score,
            parsed_rank: None,
        }
    }
}

/// Canonical order: score descending, then doc id descending.
fn canonical_cmp(a: &RankedDoc, b: &RankedDoc) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| b.doc_id.cmp(&a.doc_id))
}

/// A system's ranked result lists, keyed by topic id.
///
/// Lists are kept in canonical order, so a document's rank is its index plus one.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Run {
    pub tag: String,
    topics: BTreeMap<String, Vec<RankedDoc>>,
}

impl Run {
    pub fn new(tag: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            topics: BTreeMap::new(),
        }
    }

    /// Builds a run from per-topic lists, canonicalizing each list.
    ///
    /// Fails if a doc id occurs twice within one topic.
    pub fn from_topics(
        tag: impl Into<String>,
        topics: impl IntoIterator<Item = (String, Vec<RankedDoc>)>,
    ) -> Result<Self> {
        let mut run = Run::new(tag);
        let mut duplicates = Vec::new();
        for (topic, docs) in topics {
            let mut seen = BTreeSet::new();
            for d in &docs {
                if !seen.insert(d.doc_id.as_str()) {
                    duplicates.push((topic.clone(), d.doc_id.clone()));
                }
            }
            run.topics.entry(topic).or_default().extend(docs);
        }
        if !duplicates.is_empty() {
            return Err(Error::DuplicateEntries(duplicates));
        }
        run.canonicalize();
        Ok(run)
    }

    /// Adds an empty ranking for `topic` if it has none.
    pub fn ensure_topic(&mut self, topic: impl Into<String>) {
        self.topics.entry(topic.into()).or_default();
    }

    /// Sorts every topic into canonical order. Idempotent.
    pub fn canonicalize(&mut self) {
        for docs in self.topics.values_mut() {
            docs.sort_by(canonical_cmp);
        }
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &[RankedDoc])> {
        self.topics.iter().map(|(t, d)| (t.as_str(), d.as_slice()))
    }

    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn ranking(&self, topic: &str) -> Option<&[RankedDoc]> {
        self.topics.get(topic).map(Vec::as_slice)
    }

    /// Doc ids of `topic` in rank order; empty if the topic is absent.
    pub fn doc_ids(&self, topic: &str) -> Vec<&str> {
        self.ranking(topic)
            .map(|docs| docs.iter().map(|d| d.doc_id.as_str()).collect())
            .unwrap_or_default()
    }

    pub fn num_topics(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    /// Keeps at most `depth` documents per topic.
    pub fn truncate(&mut self, depth: usize) {
        for docs in self.topics.values_mut() {
            docs.truncate(depth);
        }
    }
}

/// Parses a TREC run: `<topic> Q0 <doc> <rank> <score> <tag>` per line.
///
/// The result is canonicalized; the rank column is kept only as
/// [`RankedDoc::parsed_rank`]. The first line's tag names the run.
pub fn parse_run<R: BufRead>(reader: R) -> Result<Parsed<Run>> {
    let mut tag: Option<String> = None;
    let mut other_tags = BTreeSet::new();
    let mut topics: BTreeMap<String, Vec<RankedDoc>> = BTreeMap::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 6 {
            return Err(Error::parse(
                lineno,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        let score: f64 = fields[4]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("unparseable score {:?}", fields[4])))?;
        if !score.is_finite() {
            return Err(Error::parse(lineno, format!("non-finite score {:?}", fields[4])));
        }
        match &tag {
            None => tag = Some(fields[5].to_string()),
            Some(t) if t != fields[5] => {
                other_tags.insert(fields[5].to_string());
            }
            _ => {}
        }
        topics.entry(fields[0].to_string()).or_default().push(RankedDoc {
            doc_id: fields[2].to_string(),
            score,
            parsed_rank: fields[3].parse().ok(),
        });
    }

    let tag = tag.unwrap_or_default();
    let mut warnings = Vec::new();
    if !other_tags.is_empty() {
        let others: Vec<_> = other_tags.into_iter().collect();
        warnings.push(format!(
            "run contains several tags; using {tag:?}, ignoring {}",
            others.join(", ")
        ));
    }
    let run = Run::from_topics(tag, topics)?;
    Ok(Parsed {
        value: run,
        warnings,
    })
}

/// Writes `run` in TREC format, in canonical order, ranks 1..n per topic.
///
/// Scores use the shortest decimal representation that parses back to the
/// same `f64`.
pub fn write_run<W: Write>(run: &Run, mut sink: W) -> Result<()> {
    for (topic, docs) in run.topics() {
        for (i, d) in docs.iter().enumerate() {
            writeln!(sink, "{topic} Q0 {} {} {} {}", d.doc_id, i + 1, d.score, run.tag)?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Run> {
        parse_run(text.as_bytes()).map(Parsed::into_inner)
    }

    #[test]
    fn single_line() {
        let run = parse("q01 Q0 d7 1 12.5 bm25").unwrap();
        assert_eq!(run.tag, "bm25");
        assert_eq!(run.ranking("q01").unwrap(), &[RankedDoc {
            doc_id: "d7".into(),
            score: 12.5,
            parsed_rank: Some(1)
        }]);
    }

    #[test]
    fn resorted_by_score() {
        let run = parse("q01 Q0 a 1 3.0 t\nq01 Q0 b 2 5.0 t\n").unwrap();
        assert_eq!(run.doc_ids("q01"), vec!["b", "a"]);
    }

    #[test]
    fn tie_break_doc_id_descending() {
        // every input permutation of the tied pair yields the same order
        for text in ["q Q0 dA 1 2.0 t\nq Q0 dB 2 2.0 t", "q Q0 dB 1 2.0 t\nq Q0 dA 2 2.0 t"] {
            assert_eq!(parse(text).unwrap().doc_ids("q"), vec!["dB", "dA"]);
        }
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let err = parse("q Q0 a 1 1.0 t\n\nq Q0 b 2 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn bad_score_reports_line() {
        let err = parse("q Q0 a 1 x t").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse("q Q0 a 1 NaN t").is_err());
    }

    #[test]
    fn duplicates_listed() {
        let err = parse("q Q0 a 1 1 t\nq Q0 a 2 0.5 t\nr Q0 b 1 1 t\nr Q0 b 1 1 t").unwrap_err();
        match err {
            Error::DuplicateEntries(d) => assert_eq!(
                d,
                vec![("q".into(), "a".into()), ("r".into(), "b".into())]
            ),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn mixed_tags_warn_first_wins() {
        let parsed = parse_run("q Q0 a 1 1 first\nq Q0 b 2 0.5 second\n".as_bytes()).unwrap();
        assert_eq!(parsed.value.tag, "first");
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn q0_field_case_unchecked() {
        assert!(parse("q q0 a 1 1 t").is_ok());
    }

    #[test]
    fn empty_run_writes_nothing() {
        let mut out = Vec::new();
        write_run(&Run::new("x"), &mut out).unwrap();
        assert!(out.is_empty());
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn round_trip() {
        let text = "q2 Q0 z 9 0.1 sys\nq1 Q0 a 3 1e-7 sys\nq1 Q0 b 1 -2.5 sys\nq1 Q0 c 2 0.30000000000000004 sys\n";
        let run = parse(text).unwrap();
        let mut out = Vec::new();
        write_run(&run, &mut out).unwrap();
        let again = parse(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again.tag, run.tag);
        for (t, docs) in run.topics() {
            let other = again.ranking(t).unwrap();
            assert_eq!(docs.len(), other.len());
            for (a, b) in docs.iter().zip(other) {
                assert_eq!(a.doc_id, b.doc_id);
                assert_eq!(a.score.to_bits(), b.score.to_bits());
            }
        }
    }

    #[test]
    fn canonicalize_idempotent() {
        let mut run = parse("q Q0 a 1 1 t\nq Q0 b 2 1 t\nq Q0 c 3 2 t").unwrap();
        let before = run.clone();
        run.canonicalize();
        assert_eq!(run, before);
    }
}
