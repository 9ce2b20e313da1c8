//! Error-based metrics on two equal-length score vectors.

use super::{ErrorScale, Family, MetricId, MetricValue};
use crate::error::{Error, Result};
use crate::perm::check_same_len;

/// Sums non-negative terms in ascending order so the result does not depend
/// on the order of the inputs.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Evaluates an error-based metric on score vectors `a` (reference) and `b`.
/// Full permutations and top-`k` prefixes are both valid inputs.
pub fn error_metric(id: MetricId, a: &[u32], b: &[u32], scale: ErrorScale) -> Result<MetricValue> {
    if id.descriptor().family != Family::ErrorBased {
        return Err(Error::WrongFamily {
            metric: id.name(),
            expected: "error-based",
        });
    }
    check_same_len(a.len(), b.len())?;
    let len = a.len();
    if len == 0 {
        return Err(Error::EmptyRanking);
    }
    let scaled = |sum: u64| match scale {
        ErrorScale::Sum => sum as f64,
        ErrorScale::Mean => sum as f64 / len as f64,
    };
    let pairs = || a.iter().zip(b).map(|(&x, &y)| (x as i64, y as i64));
    let squared = || pairs().map(|(x, y)| ((x - y) * (x - y)) as u64).sum::<u64>();
    let absolute = || pairs().map(|(x, y)| (x - y).unsigned_abs()).sum::<u64>();
    let value = match id {
        MetricId::Mse => scaled(squared()),
        MetricId::Rmse => scaled(squared()).sqrt(),
        MetricId::Mae => scaled(absolute()),
        MetricId::Rmae => scaled(absolute()).sqrt(),
        MetricId::Mape => {
            let terms = pairs().map(|(x, y)| (x - y).abs() as f64 / x as f64).collect();
            100.0 / len as f64 * ordered_sum(terms)
        }
        MetricId::Smape => {
            let terms = pairs()
                .map(|(x, y)| 2.0 * (x - y).abs() as f64 / (x + y) as f64)
                .collect();
            100.0 / len as f64 * ordered_sum(terms)
        }
        MetricId::R2 => return Ok(r2(a, b)),
        _ => unreachable!("family checked above"),
    };
    Ok(MetricValue::Defined(value))
}

/// `1 - Σ(a_i - b_i)² / Σ(a_i - mean(b))²`, evaluated with exact integer
/// numerator and denominator scaled by the length.
fn r2(a: &[u32], b: &[u32]) -> MetricValue {
    let len = a.len() as i128;
    let sum_a: i128 = a.iter().map(|&x| x as i128).sum();
    let sum_b: i128 = b.iter().map(|&y| y as i128).sum();
    let sum_a2: i128 = a.iter().map(|&x| (x as i128) * (x as i128)).sum();
    let sq: i128 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as i128 - y as i128).pow(2))
        .sum();
    // len * Σ(a_i - mean_b)² = len·Σa² - 2·Σa·Σb + (Σb)²
    let den = len * sum_a2 - 2 * sum_a * sum_b + sum_b * sum_b;
    MetricValue::ratio((len * sq) as f64, den as f64).map(|r| 1.0 - r)
}
