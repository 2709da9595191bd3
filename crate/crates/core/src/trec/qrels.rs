use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::Parsed;
use crate::error::{Error, Result};

/// Graded relevance label. 0 is not relevant; anything above is relevant.
pub type Grade = u32;

/// Judgments for a single topic, keyed by doc id.
pub type TopicQrels = BTreeMap<String, Grade>;

/// Relevance judgments keyed by topic id, then doc id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Qrels {
    judgments: BTreeMap<String, TopicQrels>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets a judgment, returning the grade it replaced.
    pub fn insert(
        &mut self,
        topic: impl Into<String>,
        doc: impl Into<String>,
        grade: Grade,
    ) -> Option<Grade> {
        self.judgments
            .entry(topic.into())
            .or_default()
            .insert(doc.into(), grade)
    }

    pub fn topic(&self, topic: &str) -> Option<&TopicQrels> {
        self.judgments.get(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &TopicQrels)> {
        self.judgments.iter().map(|(t, j)| (t.as_str(), j))
    }

    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn contains_topic(&self, topic: &str) -> bool {
        self.judgments.contains_key(topic)
    }

    pub fn num_topics(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }
}

impl<T: Into<String>, D: Into<String>> FromIterator<(T, D, Grade)> for Qrels {
    fn from_iter<I: IntoIterator<Item = (T, D, Grade)>>(iter: I) -> Self {
        let mut q = Qrels::new();
        for (t, d, g) in iter {
            q.insert(t, d, g);
        }
        q
    }
}

/// Parses `<topic> <iteration> <doc> <grade>` lines.
///
/// A repeated (topic, doc) pair overrides the earlier judgment and yields a warning.
pub fn parse_qrels<R: BufRead>(reader: R) -> Result<Parsed<Qrels>> {
    let mut qrels = Qrels::new();
    let mut warnings = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::parse(
                lineno,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let grade: i64 = fields[3]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("non-integer grade {:?}", fields[3])))?;
        if grade < 0 {
            return Err(Error::parse(lineno, format!("negative grade {grade}")));
        }
        let grade = Grade::try_from(grade)
            .map_err(|_| Error::parse(lineno, format!("grade {grade} out of range")))?;
        if let Some(prev) = qrels.insert(fields[0], fields[2], grade) {
            warnings.push(format!(
                "line {lineno}: {}/{} judged again ({prev} -> {grade}), keeping the later grade",
                fields[0], fields[2]
            ));
        }
    }
    Ok(Parsed {
        value: qrels,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_judgment() {
        let q = parse_qrels("q01 0 d7 2".as_bytes()).unwrap().value;
        assert_eq!(q.topic("q01").unwrap().get("d7"), Some(&2));
    }

    #[test]
    fn last_wins_with_warning() {
        let p = parse_qrels("q01 0 d7 1\nq01 0 d7 0\n".as_bytes()).unwrap();
        assert_eq!(p.value.topic("q01").unwrap().get("d7"), Some(&0));
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn negative_grade_rejected() {
        let err = parse_qrels("q01 0 d7 -1".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn non_integer_grade_rejected() {
        let err = parse_qrels("q 0 a 1\nq 0 b 1.5".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn line_order_irrelevant() {
        let a = parse_qrels("q1 0 a 1\nq2 0 b 0\nq1 0 c 2".as_bytes()).unwrap().value;
        let b = parse_qrels("q1 0 c 2\nq1 0 a 1\nq2 0 b 0".as_bytes()).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn topic_without_relevant_docs_kept() {
        let q = parse_qrels("q1 0 a 0\nq1 0 b 0".as_bytes()).unwrap().value;
        assert_eq!(q.num_topics(), 1);
    }
}
