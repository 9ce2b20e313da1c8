//! Confusion-matrix based metrics.

use super::{Family, MetricId, MetricValue, RelevanceConfig};
use crate::error::{Error, Result};
use crate::perm::{check_same_len, Permutation};

/// Cell counts of the 2x2 confusion matrix between the relevant set `R` and
/// the retrieved set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConfusionCounts {
    /// `|S ∩ R|`
    pub tp: u64,
    /// `|S \ R|`
    pub fp: u64,
    /// `|R \ S|`
    pub fn_: u64,
    /// `n - |S ∪ R|`
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn n(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn relevant(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn retrieved(&self) -> u64 {
        self.tp + self.fp
    }
}

/// Counts for `R = set(σ|j)` and `S = set(τ|k)`.
pub fn confusion_counts(
    sigma: &Permutation,
    tau: &Permutation,
    cfg: RelevanceConfig,
) -> Result<ConfusionCounts> {
    check_same_len(sigma.len(), tau.len())?;
    let n = sigma.len();
    cfg.validate(n)?;
    let mut relevant = vec![false; n];
    for &v in &sigma.as_slice()[..cfg.relevant] {
        relevant[v as usize - 1] = true;
    }
    let tp = tau.as_slice()[..cfg.retrieved]
        .iter()
        .filter(|&&v| relevant[v as usize - 1])
        .count() as u64;
    let (j, k, n) = (cfg.relevant as u64, cfg.retrieved as u64, n as u64);
    Ok(ConfusionCounts {
        tp,
        fp: k - tp,
        fn_: j - tp,
        tn: n + tp - j - k,
    })
}

/// Value of a confusion-matrix metric. `beta` weights the F-score.
pub fn cmb_metric(id: MetricId, c: ConfusionCounts, beta: f64) -> Result<MetricValue> {
    if id.descriptor().family != Family::ConfusionMatrix {
        return Err(Error::WrongFamily {
            metric: id.name(),
            expected: "confusion-matrix",
        });
    }
    let (tp, fp, fn_, tn) = (c.tp as f64, c.fp as f64, c.fn_ as f64, c.tn as f64);
    let tpr = MetricValue::ratio(tp, tp + fn_);
    let tnr = MetricValue::ratio(tn, tn + fp);
    let fpr = MetricValue::ratio(fp, tn + fp);
    let precision = MetricValue::ratio(tp, tp + fp);
    let npv = MetricValue::ratio(tn, tn + fn_);
    let both = |a: MetricValue, b: MetricValue, f: fn(f64, f64) -> f64| match (a, b) {
        (MetricValue::Defined(x), MetricValue::Defined(y)) => MetricValue::Defined(f(x, y)),
        _ => MetricValue::Undefined,
    };
    use MetricId::*;
    let value = match id {
        Recall => tpr,
        Fnr => MetricValue::ratio(fn_, tp + fn_),
        Fallout => fpr,
        Tnr => tnr,
        Precision => precision,
        Fdr => MetricValue::ratio(fp, tp + fp),
        Npv => npv,
        For => MetricValue::ratio(fn_, tn + fn_),
        Accuracy => MetricValue::ratio(tp + tn, c.n() as f64),
        Ba => both(tpr, tnr, |a, b| (a + b) / 2.0),
        F1 => {
            let b2 = beta * beta;
            MetricValue::ratio((1.0 + b2) * tp, (1.0 + b2) * tp + b2 * fn_ + fp)
        }
        Fm => both(precision, tpr, |p, r| (p * r).sqrt()),
        Mcc => {
            // Integer product keeps the value exactly symmetric in (fp, fn).
            let den = (c.tp + c.fp) as u128
                * (c.tp + c.fn_) as u128
                * (c.tn + c.fp) as u128
                * (c.tn + c.fn_) as u128;
            let num = c.tp as i128 * c.tn as i128 - c.fp as i128 * c.fn_ as i128;
            MetricValue::ratio(num as f64, (den as f64).sqrt())
        }
        Jaccard => MetricValue::ratio(tp, tp + fp + fn_),
        Markedness => both(precision, npv, |p, v| p + v - 1.0),
        LrMinus => match tnr {
            MetricValue::Defined(t) => MetricValue::ratio(fn_ / (tp + fn_), t),
            MetricValue::Undefined => MetricValue::Undefined,
        },
        Informedness => both(tpr, tnr, |a, b| a + b - 1.0),
        Pt => match (tpr, fpr) {
            (MetricValue::Defined(t), MetricValue::Defined(f)) => {
                MetricValue::ratio((t * f).sqrt() - f, t - f)
            }
            _ => MetricValue::Undefined,
        },
        LrPlus => match (tpr, fpr) {
            (MetricValue::Defined(t), MetricValue::Defined(f)) => MetricValue::ratio(t, f),
            _ => MetricValue::Undefined,
        },
        _ => unreachable!("family checked above"),
    };
    Ok(value)
}
