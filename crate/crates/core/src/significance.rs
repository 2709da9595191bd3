//! Two-sided Student t-tests on per-topic score samples.

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestVariant {
    /// Pooled (equal) variance.
    #[default]
    Student,
    Welch,
}

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
fn two_sided_p(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0)
}

struct Moments {
    n: f64,
    mean: f64,
    /// Sum of squared deviations from the mean.
    ss: f64,
}

fn moments(sample: &[f64]) -> Moments {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = numeric::mean(&sorted).unwrap_or(0.0);
    let ss = numeric::sum(sorted.iter().map(|x| (x - mean) * (x - mean)));
    Moments {
        n: sorted.len() as f64,
        mean,
        ss,
    }
}

fn check_len(name: &str, sample: &[f64]) -> Result<()> {
    if sample.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "t-test needs at least 2 values in {name}, got {}",
            sample.len()
        )));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite value in {name}")));
    }
    Ok(())
}

/// p-value of a two-sided unpaired t-test; the samples may differ in length.
///
/// Two constant samples with the same value give `p = 1`; constant samples
/// with different values have no defined statistic and are an error.
pub fn unpaired_ttest(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<f64> {
    check_len("first sample", a)?;
    check_len("second sample", b)?;
    let (ma, mb) = (moments(a), moments(b));
    let diff = ma.mean - mb.mean;

    let (se, df) = match variant {
        TTestVariant::Student => {
            let df = ma.n + mb.n - 2.0;
            let pooled = (ma.ss + mb.ss) / df;
            ((pooled * (1.0 / ma.n + 1.0 / mb.n)).sqrt(), df)
        }
        TTestVariant::Welch => {
            let va = ma.ss / (ma.n - 1.0) / ma.n;
            let vb = mb.ss / (mb.n - 1.0) / mb.n;
            let se2 = va + vb;
            let df = se2 * se2 / (va * va / (ma.n - 1.0) + vb * vb / (mb.n - 1.0));
            (se2.sqrt(), df)
        }
    };
    if se == 0.0 {
        return if diff == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::InvalidArgument(
                "t-test on two constant samples with different values".into(),
            ))
        };
    }
    Ok(two_sided_p(diff / se, df))
}

/// p-value of a two-sided paired t-test over `a[i] - b[i]`.
///
/// Identical samples give `p = 1`; a constant non-zero difference gives `p = 0`.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "paired t-test on samples of different length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    check_len("first sample", a)?;
    check_len("second sample", b)?;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = moments(&diffs);
    if m.mean == 0.0 && m.ss == 0.0 {
        return Ok(1.0);
    }
    let se = (m.ss / (m.n - 1.0) / m.n).sqrt();
    if se == 0.0 {
        return Ok(0.0);
    }
    Ok(two_sided_p(m.mean / se, m.n - 1.0))
}
