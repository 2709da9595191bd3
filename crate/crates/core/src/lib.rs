//! Longitudinal retrieval evaluation.
//!
//! Scores TREC runs against qrels from several time-stamped evaluation
//! environments (EEs) and quantifies how stable a system's effectiveness is
//! over time:
//!
//! * [`metrics`]: P@k, MAP, RR, nDCG(@k) and Bpref per topic, averaged into ARP.
//! * [`replicability`]: result deltas, effect ratio (ER), relative improvement
//!   (RI) and ΔRI of an experimental system against a pivot system, unpaired and
//!   Bonferroni-corrected paired t-tests, and core-topic harmonization.
//! * [`fusion`]: reciprocal rank fusion with an optional k sweep.
//! * [`corpus`]: snapshot-to-snapshot document evolution and collection statistics.
//! * [`trec`]: run, qrels, query and manifest file formats.
//!
//! ```
//! use tempeval::metrics::{arp, evaluate, MeasureId};
//! use tempeval::trec::{parse_qrels, parse_run};
//!
//! let run = parse_run("q1 Q0 d1 1 2.0 bm25\nq1 Q0 d2 2 1.0 bm25\n".as_bytes())?.value;
//! let qrels = parse_qrels("q1 0 d2 1\n".as_bytes())?.value;
//! let table = evaluate(&run, &qrels, &[MeasureId::RR])?;
//! assert_eq!(arp(&table, MeasureId::RR, None)?, 0.5);
//! # Ok::<(), tempeval::Error>(())
//! ```

pub mod cli;
pub mod corpus;
mod error;
pub mod fusion;
pub mod metrics;
pub mod numeric;
pub mod plot;
pub mod replicability;
pub mod report;
pub mod significance;
pub mod trec;

pub use error::{Error, Result};
