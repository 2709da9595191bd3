//! Per-topic measures. Rankings are doc ids in rank order; binary measures
//! treat any grade >= 1 as relevant.

use super::measure::{MeasureId, MeasureKind};
use crate::numeric;
use crate::trec::{Grade, TopicQrels};

fn grade(qrels: &TopicQrels, doc: &str) -> Option<Grade> {
    qrels.get(doc).copied()
}

fn is_relevant(qrels: &TopicQrels, doc: &str) -> bool {
    grade(qrels, doc).is_some_and(|g| g >= 1)
}

fn num_relevant(qrels: &TopicQrels) -> usize {
    qrels.values().filter(|&&g| g >= 1).count()
}

/// Relevant documents in the top `k`, divided by `k` (short rankings are not
/// padded).
pub fn precision_at_k<S: AsRef<str>>(ranking: &[S], qrels: &TopicQrels, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let hits = ranking
        .iter()
        .take(k)
        .filter(|d| is_relevant(qrels, d.as_ref()))
        .count();
    hits as f64 / k as f64
}

/// Average precision over all relevant documents in the qrels; 0 if there are none.
pub fn average_precision<S: AsRef<str>>(ranking: &[S], qrels: &TopicQrels) -> f64 {
    let r = num_relevant(qrels);
    if r == 0 {
        return 0.0;
    }
    let mut hits = 0usize;
    let terms = ranking.iter().enumerate().filter_map(|(i, d)| {
        if is_relevant(qrels, d.as_ref()) {
            hits += 1;
            Some(hits as f64 / (i + 1) as f64)
        } else {
            None
        }
    });
    numeric::sum(terms) / r as f64
}

pub fn reciprocal_rank<S: AsRef<str>>(ranking: &[S], qrels: &TopicQrels) -> f64 {
    ranking
        .iter()
        .position(|d| is_relevant(qrels, d.as_ref()))
        .map_or(0.0, |i| 1.0 / (i + 1) as f64)
}

fn discount(rank: usize) -> f64 {
    1.0 / ((rank + 1) as f64).log2()
}

/// nDCG with gain = grade and discount 1/log2(rank + 1).
///
/// The ideal ranking is the qrels sorted by grade, truncated at the same cutoff.
pub fn ndcg<S: AsRef<str>>(ranking: &[S], qrels: &TopicQrels, cutoff: Option<usize>) -> f64 {
    let depth = cutoff.unwrap_or(usize::MAX);

    let mut ideal: Vec<Grade> = qrels.values().copied().filter(|&g| g > 0).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = numeric::sum(
        ideal
            .iter()
            .take(depth)
            .enumerate()
            .map(|(i, &g)| g as f64 * discount(i + 1)),
    );
    if idcg == 0.0 {
        return 0.0;
    }

    let dcg = numeric::sum(ranking.iter().take(depth).enumerate().filter_map(|(i, d)| {
        grade(qrels, d.as_ref())
            .filter(|&g| g > 0)
            .map(|g| g as f64 * discount(i + 1))
    }));
    dcg / idcg
}

/// Binary preference over judged documents.
///
/// Each retrieved relevant document scores
/// `1 - min(nonrel_above, min(R, N)) / min(R, N)` where `nonrel_above` counts
/// judged non-relevant documents ranked above it. Unjudged documents are
/// ignored.
pub fn bpref<S: AsRef<str>>(ranking: &[S], qrels: &TopicQrels) -> f64 {
    let r = num_relevant(qrels);
    if r == 0 {
        return 0.0;
    }
    let n = qrels.values().filter(|&&g| g == 0).count();
    let bound = r.min(n);

    let mut nonrel_above = 0usize;
    let mut terms = Vec::new();
    for d in ranking {
        match grade(qrels, d.as_ref()) {
            Some(0) => nonrel_above += 1,
            Some(_) => terms.push(if bound == 0 {
                1.0
            } else {
                1.0 - nonrel_above.min(bound) as f64 / bound as f64
            }),
            None => {}
        }
    }
    numeric::sum(terms) / r as f64
}

/// Dispatches to the measure named by `measure`.
pub fn score_topic<S: AsRef<str>>(measure: MeasureId, ranking: &[S], qrels: &TopicQrels) -> f64 {
    match measure.kind() {
        MeasureKind::P => precision_at_k(ranking, qrels, measure.cutoff().unwrap_or(1)),
        MeasureKind::Map => average_precision(ranking, qrels),
        MeasureKind::Rr => reciprocal_rank(ranking, qrels),
        MeasureKind::Ndcg => ndcg(ranking, qrels, measure.cutoff()),
        MeasureKind::Bpref => bpref(ranking, qrels),
    }
}
