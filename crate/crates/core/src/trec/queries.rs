use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Query texts of one evaluation environment, keyed by topic id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QuerySet {
    pub ee_label: String,
    pub queries: BTreeMap<String, String>,
}

impl QuerySet {
    pub fn new(ee_label: impl Into<String>) -> Self {
        Self {
            ee_label: ee_label.into(),
            queries: BTreeMap::new(),
        }
    }

    pub fn from_pairs<T, Q>(ee_label: impl Into<String>, pairs: impl IntoIterator<Item = (T, Q)>) -> Self
    where
        T: Into<String>,
        Q: Into<String>,
    {
        Self {
            ee_label: ee_label.into(),
            queries: pairs.into_iter().map(|(t, q)| (t.into(), q.into())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }
}

/// Parses a `<topic_id>\t<query_text>` file. A line without a tab is a topic
/// with empty query text.
pub fn parse_queries<R: BufRead>(reader: R, ee_label: impl Into<String>) -> Result<QuerySet> {
    let mut set = QuerySet::new(ee_label);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let (topic, text) = line.split_once('\t').unwrap_or((line, ""));
        let topic = topic.trim();
        if topic.is_empty() {
            return Err(Error::parse(idx + 1, "missing topic id"));
        }
        if set.queries.insert(topic.to_string(), text.to_string()).is_some() {
            return Err(Error::parse(idx + 1, format!("duplicate topic id {topic}")));
        }
    }
    Ok(set)
}
