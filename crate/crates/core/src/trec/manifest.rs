use std::collections::BTreeSet;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    #[default]
    Chars,
    Tokens,
}

impl FromStr for LengthUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chars" | "characters" => Ok(LengthUnit::Chars),
            "tokens" => Ok(LengthUnit::Tokens),
            other => Err(Error::InvalidArgument(format!("unknown length unit {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocRecord {
    pub doc_id: String,
    pub url: String,
    pub length: u64,
}

/// Per-document metadata of one corpus snapshot.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub ee_label: String,
    pub unit: LengthUnit,
    pub records: Vec<DocRecord>,
}

impl CorpusManifest {
    /// Builds a manifest, rejecting repeated doc ids.
    pub fn new(
        ee_label: impl Into<String>,
        unit: LengthUnit,
        records: Vec<DocRecord>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.doc_id.as_str()) {
                return Err(Error::DuplicateId(r.doc_id.clone()));
            }
        }
        Ok(Self {
            ee_label: ee_label.into(),
            unit,
            records,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Parses `<doc_id>\t<url>\t<length>` records.
pub fn parse_manifest<R: BufRead>(
    reader: R,
    ee_label: impl Into<String>,
    unit: LengthUnit,
) -> Result<CorpusManifest> {
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let length: u64 = fields[2].trim().parse().map_err(|_| {
            Error::parse(lineno, format!("length is not a non-negative integer: {:?}", fields[2]))
        })?;
        let doc_id = fields[0].trim().to_string();
        if !seen.insert(doc_id.clone()) {
            return Err(Error::parse(lineno, format!("duplicate doc id {doc_id}")));
        }
        records.push(DocRecord {
            doc_id,
            url: fields[1].trim().to_string(),
            length,
        });
    }
    Ok(CorpusManifest {
        ee_label: ee_label.into(),
        unit,
        records,
    })
}
