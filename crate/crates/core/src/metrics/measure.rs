use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureKind {
    P,
    Map,
    Rr,
    Ndcg,
    Bpref,
}

/// A measure with its optional rank cutoff, e.g. `P@20` or `nDCG@20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MeasureId {
    kind: MeasureKind,
    cutoff: Option<usize>,
}

impl MeasureId {
    /// Validates the kind/cutoff combination: `P` needs a cutoff, `nDCG`
    /// takes an optional one, the rest take none. Cutoffs are at least 1.
    pub fn new(kind: MeasureKind, cutoff: Option<usize>) -> Result<Self> {
        match (kind, cutoff) {
            (_, Some(0)) => Err(Error::InvalidArgument("measure cutoff must be >= 1".into())),
            (MeasureKind::P, None) => {
                Err(Error::InvalidArgument("precision needs a cutoff, e.g. P@20".into()))
            }
            (MeasureKind::Map | MeasureKind::Rr | MeasureKind::Bpref, Some(k)) => Err(
                Error::InvalidArgument(format!("{kind:?} does not take a cutoff (got {k})")),
            ),
            _ => Ok(Self { kind, cutoff }),
        }
    }

    pub const MAP: MeasureId = MeasureId {
        kind: MeasureKind::Map,
        cutoff: None,
    };
    pub const BPREF: MeasureId = MeasureId {
        kind: MeasureKind::Bpref,
        cutoff: None,
    };
    pub const RR: MeasureId = MeasureId {
        kind: MeasureKind::Rr,
        cutoff: None,
    };
    pub const NDCG: MeasureId = MeasureId {
        kind: MeasureKind::Ndcg,
        cutoff: None,
    };

    pub fn precision(k: usize) -> Result<Self> {
        Self::new(MeasureKind::P, Some(k))
    }

    pub fn ndcg_at(k: usize) -> Result<Self> {
        Self::new(MeasureKind::Ndcg, Some(k))
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }
}

/// MAP, Bpref, RR, P@20, nDCG and nDCG@20.
pub fn default_measures() -> Vec<MeasureId> {
    vec![
        MeasureId::MAP,
        MeasureId::BPREF,
        MeasureId::RR,
        MeasureId {
            kind: MeasureKind::P,
            cutoff: Some(20),
        },
        MeasureId::NDCG,
        MeasureId {
            kind: MeasureKind::Ndcg,
            cutoff: Some(20),
        },
    ]
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            MeasureKind::P => "P",
            MeasureKind::Map => "MAP",
            MeasureKind::Rr => "RR",
            MeasureKind::Ndcg => "nDCG",
            MeasureKind::Bpref => "Bpref",
        };
        match self.cutoff {
            Some(k) => write!(f, "{name}@{k}"),
            None => f.write_str(name),
        }
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    /// Accepts `map`, `bpref`, `rr`/`recip_rank`, `p@k`/`p_k`, `ndcg`,
    /// `ndcg@k`/`ndcg_cut_k`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, cutoff) = match lower.split_once('@') {
            Some((n, k)) => (n.to_string(), Some(k.to_string())),
            None => match lower.rsplit_once('_') {
                Some((n, k)) if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => {
                    (n.to_string(), Some(k.to_string()))
                }
                _ => (lower.clone(), None),
            },
        };
        let cutoff = cutoff
            .map(|k| {
                k.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad cutoff in measure {s:?}")))
            })
            .transpose()?;
        let kind = match name.as_str() {
            "p" => MeasureKind::P,
            "map" => MeasureKind::Map,
            "rr" | "mrr" | "recip_rank" => MeasureKind::Rr,
            "ndcg" | "ndcg_cut" => MeasureKind::Ndcg,
            "bpref" => MeasureKind::Bpref,
            _ => return Err(Error::InvalidArgument(format!("unknown measure {s:?}"))),
        };
        MeasureId::new(kind, cutoff)
    }
}

impl TryFrom<String> for MeasureId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MeasureId> for String {
    fn from(m: MeasureId) -> String {
        m.to_string()
    }
}
