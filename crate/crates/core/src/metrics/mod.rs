//! The ranking evaluation metric catalog.
//!
//! Every metric is a function of one or two permutations. Relevance follows the
//! fixed convention `rel_i = σ(i)`; confusion-matrix metrics take their relevant
//! set from the first argument's top `j` and their retrieved set from the second
//! argument's top `k`.

mod confusion;
mod correlation;
mod errors;
mod gain;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{check_same_len, Permutation};

pub use confusion::{cmb_metric, confusion_counts, ConfusionCounts};
pub use correlation::{
    discordant_pairs, kendall_distance, kendall_tau, ndpm, pair_counts, spearman_rho, PairCounts,
};
pub use errors::error_metric;
pub use gain::{dcg, dcg_at, idcg, idcg_at, ndcg, ndcg_at, positional_metric};

macro_rules! metric_ids {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// Identifier of a registered metric. Spellings match the CLI and CSV names.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum MetricId {
            $($variant),+
        }

        impl MetricId {
            /// Every registered metric, in catalog order.
            pub const ALL: &'static [MetricId] = &[$(MetricId::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(MetricId::$variant => $name),+
                }
            }
        }

        impl FromStr for MetricId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok(MetricId::$variant),)+
                    other => Err(Error::UnknownMetric(other.to_string())),
                }
            }
        }
    };
}

metric_ids! {
    Recall => "recall",
    Fnr => "fnr",
    Fallout => "fallout",
    Tnr => "tnr",
    Precision => "precision",
    Fdr => "fdr",
    Npv => "npv",
    For => "for",
    Accuracy => "accuracy",
    Ba => "ba",
    F1 => "f1",
    Fm => "fm",
    Mcc => "mcc",
    Jaccard => "jaccard",
    Markedness => "markedness",
    LrMinus => "lr_minus",
    Informedness => "informedness",
    Pt => "pt",
    LrPlus => "lr_plus",
    Mse => "mse",
    Rmse => "rmse",
    Mae => "mae",
    Rmae => "rmae",
    Mape => "mape",
    Smape => "smape",
    R2 => "r2",
    KendallTau => "kendall_tau",
    KendallDistance => "kendall_distance",
    SpearmanRho => "spearman_rho",
    Ndpm => "ndpm",
    Dcg => "dcg",
    Ndcg => "ndcg",
    Mrr => "mrr",
    Gmr => "gmr",
    MeanRank => "mean_rank",
}

impl MetricId {
    /// The 33 metrics of the published catalog, without the registry
    /// extensions `kendall_distance` and `rmae`.
    pub fn catalog_metrics() -> Vec<MetricId> {
        Self::ALL
            .iter()
            .copied()
            .filter(|m| !m.is_extension())
            .collect()
    }

    pub fn is_extension(self) -> bool {
        matches!(self, MetricId::KendallDistance | MetricId::Rmae)
    }

    pub fn descriptor(self) -> MetricDescriptor {
        use MetricId::*;
        let family = match self {
            Mse | Rmse | Mae | Rmae | Mape | Smape | R2 => Family::ErrorBased,
            KendallTau | KendallDistance | SpearmanRho | Ndpm => Family::CorrelationBased,
            Dcg | Ndcg | Mrr | Gmr | MeanRank => Family::CumulativeGain,
            _ => Family::ConfusionMatrix,
        };
        let arity = match family {
            Family::CumulativeGain => Arity::One,
            _ => Arity::Two,
        };
        // Arity-one orientations are stated relative to the identity, which
        // minimizes dcg, ndcg, gmr and mean_rank and maximizes mrr.
        let orientation = match self {
            Fnr | Fallout | Fdr | For | LrMinus | Pt | Mse | Rmse | Mae | Rmae | Mape | Smape
            | KendallDistance | Ndpm | Dcg | Ndcg | Gmr | MeanRank => Orientation::LowerIsCloser,
            _ => Orientation::HigherIsCloser,
        };
        let bounded_range = match self {
            Recall | Fnr | Fallout | Tnr | Precision | Fdr | Npv | For | Accuracy | Ba | F1
            | Fm | Jaccard | Pt | Ndcg => Some((0.0, 1.0)),
            Mcc | Markedness | Informedness | KendallTau | SpearmanRho => Some((-1.0, 1.0)),
            Ndpm => Some((-0.5, 1.5)),
            Mape | Smape => Some((0.0, f64::INFINITY)),
            _ => None,
        };
        let note = match self {
            Mse | Mae | Rmse | Rmae => Some("unnormalized sum unless mean-normalized errors are requested"),
            Mape => Some("first argument is the denominator reference"),
            Ndpm => Some("literal ordered-pair sums; equals 1/2 - kendall_tau on permutations"),
            F1 => Some("F-beta with beta = 1 by default"),
            _ => None,
        };
        MetricDescriptor {
            id: self,
            family,
            arity,
            orientation,
            supports_at_k: true,
            bounded_range,
            note,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Confusion-matrix based (set based).
    ConfusionMatrix,
    /// Error based.
    ErrorBased,
    /// Correlation based.
    CorrelationBased,
    /// Cumulative-gain based (ranking aware, single input).
    CumulativeGain,
}

impl Family {
    pub fn code(self) -> &'static str {
        match self {
            Family::ConfusionMatrix => "CMB",
            Family::ErrorBased => "EB",
            Family::CorrelationBased => "CB",
            Family::CumulativeGain => "CGB",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    HigherIsCloser,
    LowerIsCloser,
}

impl Orientation {
    /// Maps a raw value so that larger always means closer to the reference.
    pub fn normalize(self, value: f64) -> f64 {
        match self {
            Orientation::HigherIsCloser => value,
            Orientation::LowerIsCloser => -value,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::HigherIsCloser => "higher_is_more_similar",
            Orientation::LowerIsCloser => "lower_is_more_similar",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricDescriptor {
    pub id: MetricId,
    pub family: Family,
    pub arity: Arity,
    pub orientation: Orientation,
    pub supports_at_k: bool,
    pub bounded_range: Option<(f64, f64)>,
    pub note: Option<&'static str>,
}

/// The full registry in catalog order.
pub fn catalog() -> Vec<MetricDescriptor> {
    MetricId::ALL.iter().map(|m| m.descriptor()).collect()
}

/// Result of evaluating a metric: a number, or undefined when a formula hits a
/// zero denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Defined(f64),
    Undefined,
}

impl MetricValue {
    pub(crate) fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            MetricValue::Undefined
        } else {
            MetricValue::Defined(num / den)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            MetricValue::Defined(v) => Some(v),
            MetricValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, MetricValue::Defined(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            MetricValue::Defined(v) => MetricValue::Defined(f(v)),
            MetricValue::Undefined => MetricValue::Undefined,
        }
    }

    /// Bit-level equality; undefined equals undefined.
    pub fn same_as(self, other: MetricValue) -> bool {
        match (self, other) {
            (MetricValue::Defined(a), MetricValue::Defined(b)) => a == b,
            (MetricValue::Undefined, MetricValue::Undefined) => true,
            _ => false,
        }
    }

    /// Total order with undefined after every number.
    pub fn total_cmp(&self, other: &MetricValue) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (MetricValue::Defined(a), MetricValue::Defined(b)) => a.total_cmp(b),
            (MetricValue::Defined(_), MetricValue::Undefined) => Ordering::Less,
            (MetricValue::Undefined, MetricValue::Defined(_)) => Ordering::Greater,
            (MetricValue::Undefined, MetricValue::Undefined) => Ordering::Equal,
        }
    }
}

impl fmt::Display for MetricValue {
    /// Twelve significant digits, or the token `undef`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Defined(v) => f.write_str(&format_significant(*v, 12)),
            MetricValue::Undefined => f.write_str("undef"),
        }
    }
}

/// Formats `x` with `digits` significant digits, trimming trailing zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Sizes of the relevant set (top `relevant` of the first argument) and the
/// retrieved set (top `retrieved` of the second argument).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelevanceConfig {
    pub relevant: usize,
    pub retrieved: usize,
}

impl RelevanceConfig {
    pub fn new(relevant: usize, retrieved: usize) -> Self {
        Self { relevant, retrieved }
    }

    pub fn symmetric(size: usize) -> Self {
        Self::new(size, size)
    }

    /// `min(30, max(1, n / 2))` for both sizes.
    pub fn default_for(n: usize) -> Self {
        Self::symmetric((n / 2).clamp(1, 30))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.relevant == 0 || self.retrieved == 0 || self.relevant > n || self.retrieved > n {
            return Err(Error::InvalidRelevance {
                relevant: self.relevant,
                retrieved: self.retrieved,
                n,
            });
        }
        Ok(())
    }
}

/// Scaling applied to the MSE/MAE family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ErrorScale {
    /// Plain sums, as the formulas are written.
    #[default]
    Sum,
    /// Sums divided by the number of terms.
    Mean,
}

/// Everything a metric evaluation can depend on besides its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub relevance: RelevanceConfig,
    pub error_scale: ErrorScale,
    pub f_beta: f64,
}

impl EvalConfig {
    pub fn new(relevance: RelevanceConfig) -> Self {
        Self {
            relevance,
            error_scale: ErrorScale::Sum,
            f_beta: 1.0,
        }
    }

    pub fn default_for(n: usize) -> Self {
        Self::new(RelevanceConfig::default_for(n))
    }
}

/// Evaluates `id` on `(sigma, tau)`. Arity-one metrics are applied to `tau`.
pub fn evaluate(
    id: MetricId,
    sigma: &Permutation,
    tau: &Permutation,
    cfg: &EvalConfig,
) -> Result<MetricValue> {
    check_same_len(sigma.len(), tau.len())?;
    match id.descriptor().family {
        Family::ConfusionMatrix => {
            let counts = confusion_counts(sigma, tau, cfg.relevance)?;
            cmb_metric(id, counts, cfg.f_beta)
        }
        Family::ErrorBased => error_metric(id, sigma.as_slice(), tau.as_slice(), cfg.error_scale),
        Family::CorrelationBased => correlation::correlation_metric(id, sigma.as_slice(), tau.as_slice()),
        Family::CumulativeGain => match id {
            MetricId::Dcg => Ok(MetricValue::Defined(dcg(tau))),
            MetricId::Ndcg => Ok(MetricValue::Defined(ndcg(tau))),
            _ => positional_metric(id, tau, cfg.relevance),
        },
    }
}

/// Evaluates `id` on the top-`k` prefixes of `sigma` and `tau`.
pub fn evaluate_at_k(
    id: MetricId,
    sigma: &Permutation,
    tau: &Permutation,
    k: usize,
    cfg: &EvalConfig,
) -> Result<MetricValue> {
    check_same_len(sigma.len(), tau.len())?;
    let n = sigma.len();
    if k == 0 || k > n {
        return Err(Error::PrefixOutOfRange { k, n });
    }
    let descriptor = id.descriptor();
    if !descriptor.supports_at_k {
        return Err(Error::Unsupported {
            metric: id.name(),
            reason: "no @k variant",
        });
    }
    let (a, b) = (&sigma.as_slice()[..k], &tau.as_slice()[..k]);
    match descriptor.family {
        Family::ConfusionMatrix => {
            let counts = confusion_counts(sigma, tau, RelevanceConfig::symmetric(k))?;
            cmb_metric(id, counts, cfg.f_beta)
        }
        Family::ErrorBased => error_metric(id, a, b, cfg.error_scale),
        Family::CorrelationBased if k < 2 => Err(Error::TooShort {
            metric: id.name(),
            n: k,
        }),
        Family::CorrelationBased => correlation::correlation_metric(id, a, b),
        Family::CumulativeGain => match id {
            MetricId::Dcg => Ok(MetricValue::Defined(dcg_at(tau, k))),
            MetricId::Ndcg => Ok(MetricValue::Defined(ndcg_at(tau, k))),
            _ => positional_metric(id, tau, RelevanceConfig::symmetric(k)),
        },
    }
}
