//! Retrieval effectiveness measures and per-run score tables.

mod measure;
mod measures;
mod table;

pub use measure::{default_measures, MeasureId, MeasureKind};
pub use measures::{average_precision, bpref, ndcg, precision_at_k, reciprocal_rank, score_topic};
pub use table::{arp, evaluate, ScoreTable};
