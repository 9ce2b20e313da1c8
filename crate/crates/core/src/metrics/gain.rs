//! Cumulative-gain metrics. Each takes a single ranking and uses `rel_i = σ(i)`.

use super::{MetricId, MetricValue, RelevanceConfig};
use crate::error::{Error, Result};
use crate::perm::Permutation;

fn discount(position: usize) -> f64 {
    ((position + 1) as f64).log2()
}

fn gain_sum(values: impl Iterator<Item = u32>) -> f64 {
    values
        .enumerate()
        .map(|(i, v)| v as f64 / discount(i + 1))
        .sum()
}

/// `Σ σ(i) / log₂(i + 1)`.
pub fn dcg(sigma: &Permutation) -> f64 {
    gain_sum(sigma.as_slice().iter().copied())
}

/// DCG over the first `k` positions. `k` is clamped to `n`.
pub fn dcg_at(sigma: &Permutation, k: usize) -> f64 {
    gain_sum(sigma.as_slice().iter().take(k).copied())
}

/// DCG of the reversal `σ(i) = n - i + 1`, the largest value on `S_n`.
pub fn idcg(n: usize) -> f64 {
    idcg_at(n, n)
}

pub fn idcg_at(n: usize, k: usize) -> f64 {
    gain_sum((1..=n as u32).rev().take(k))
}

pub fn ndcg(sigma: &Permutation) -> f64 {
    dcg(sigma) / idcg(sigma.len())
}

pub fn ndcg_at(sigma: &Permutation, k: usize) -> f64 {
    dcg_at(sigma, k) / idcg_at(sigma.len(), k)
}

/// MRR, GMR or mean rank over the first `cfg.relevant` values of `sigma`.
/// Terms are combined in sorted order, so reordering the prefix leaves the
/// result bit-identical.
pub fn positional_metric(id: MetricId, sigma: &Permutation, cfg: RelevanceConfig) -> Result<MetricValue> {
    let j = cfg.relevant;
    if j == 0 || j > sigma.len() {
        return Err(Error::InvalidRelevance {
            relevant: j,
            retrieved: cfg.retrieved,
            n: sigma.len(),
        });
    }
    let mut prefix = sigma.restrict(j)?.to_vec();
    prefix.sort_unstable();
    let len = j as f64;
    let value = match id {
        MetricId::Mrr => prefix.iter().rev().map(|&v| 1.0 / v as f64).sum::<f64>() / len,
        MetricId::MeanRank => prefix.iter().map(|&v| v as u64).sum::<u64>() as f64 / len,
        MetricId::Gmr => prefix.iter().map(|&v| v as f64).product::<f64>().powf(1.0 / len),
        _ => {
            return Err(Error::WrongFamily {
                metric: id.name(),
                expected: "positional (mrr, gmr, mean_rank)",
            })
        }
    };
    Ok(MetricValue::Defined(value))
}
