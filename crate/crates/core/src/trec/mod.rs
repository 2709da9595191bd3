//! Readers and writers for TREC-style exchange formats: runs, qrels,
//! query files and corpus manifests.

mod manifest;
mod qrels;
mod queries;
mod run;

pub use manifest::{parse_manifest, CorpusManifest, DocRecord, LengthUnit};
pub use qrels::{parse_qrels, Grade, Qrels, TopicQrels};
pub use queries::{parse_queries, QuerySet};
pub use run::{parse_run, write_run, RankedDoc, Run};

/// A parsed value together with the non-fatal issues found while reading it.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Parsed<T> {
    pub fn into_inner(self) -> T {
        self.value
    }
}
