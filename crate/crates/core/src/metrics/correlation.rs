//! Correlation-based metrics: Kendall's τ, the Kendall distance, Spearman's ρ
//! and NDPM.

use super::{MetricId, MetricValue};
use crate::error::{Error, Result};
use crate::perm::{check_same_len, Permutation};

/// Concordant and discordant unordered item pairs between two score vectors
/// with distinct entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.concordant + self.discordant
    }
}

/// Counts concordant/discordant pairs in `O(len log len)`: items are ordered by
/// `a`, and the discordant pairs are the inversions of `b` in that order.
pub fn pair_counts(a: &[u32], b: &[u32]) -> Result<PairCounts> {
    check_same_len(a.len(), b.len())?;
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_unstable_by_key(|&i| a[i]);
    let mut seq: Vec<u32> = order.iter().map(|&i| b[i]).collect();
    let mut buf = vec![0u32; seq.len()];
    let discordant = count_inversions(&mut seq, &mut buf);
    let len = a.len() as u64;
    let total = len * len.saturating_sub(1) / 2;
    Ok(PairCounts {
        concordant: total - discordant,
        discordant,
    })
}

fn count_inversions(seq: &mut [u32], buf: &mut [u32]) -> u64 {
    let len = seq.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut count = {
        let (left, right) = seq.split_at_mut(mid);
        let (lbuf, rbuf) = buf.split_at_mut(mid);
        count_inversions(left, lbuf) + count_inversions(right, rbuf)
    };
    let (mut i, mut j, mut out) = (0, mid, 0);
    while i < mid && j < len {
        if seq[i] <= seq[j] {
            buf[out] = seq[i];
            i += 1;
        } else {
            buf[out] = seq[j];
            count += (mid - i) as u64;
            j += 1;
        }
        out += 1;
    }
    buf[out..out + mid - i].copy_from_slice(&seq[i..mid]);
    out += mid - i;
    buf[out..out + len - j].copy_from_slice(&seq[j..len]);
    seq.copy_from_slice(&buf[..len]);
    count
}

fn require_pairs(metric: &'static str, len: usize) -> Result<()> {
    if len < 2 {
        return Err(Error::TooShort { metric, n: len });
    }
    Ok(())
}

/// Ranks `1..=len` of distinct scores.
fn ranks(scores: &[u32]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by_key(|&i| scores[i]);
    let mut out = vec![0u64; scores.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u64 + 1;
    }
    out
}

fn tau_from_counts(c: PairCounts) -> f64 {
    (c.concordant as f64 - c.discordant as f64) / c.total() as f64
}

fn spearman_scores(a: &[u32], b: &[u32]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let len = a.len() as u64;
    let d2: u64 = ra.iter().zip(&rb).map(|(&x, &y)| x.abs_diff(y).pow(2)).sum();
    1.0 - (6 * d2) as f64 / (len * (len * len - 1)) as f64
}

/// `(C₋ + C_u0 / 2) / C_u` with every sum taken over ordered pairs `i ≠ j`.
fn ndpm_from_counts(c: PairCounts) -> f64 {
    let (conc, disc) = (c.concordant as i128, c.discordant as i128);
    // Each unordered pair appears twice among the ordered pairs.
    let c_plus = 2 * (conc - disc);
    let c_minus = 2 * (disc - conc);
    let c_u = 2 * (conc + disc);
    let c_u0 = c_u - c_plus - c_minus;
    (2 * c_minus + c_u0) as f64 / (2 * c_u) as f64
}

pub(crate) fn correlation_metric(id: MetricId, a: &[u32], b: &[u32]) -> Result<MetricValue> {
    check_same_len(a.len(), b.len())?;
    if id != MetricId::KendallDistance {
        require_pairs(id.name(), a.len())?;
    }
    let value = match id {
        MetricId::KendallTau => tau_from_counts(pair_counts(a, b)?),
        MetricId::KendallDistance => pair_counts(a, b)?.discordant as f64,
        MetricId::SpearmanRho => spearman_scores(a, b),
        MetricId::Ndpm => ndpm_from_counts(pair_counts(a, b)?),
        _ => {
            return Err(Error::WrongFamily {
                metric: id.name(),
                expected: "correlation-based",
            })
        }
    };
    Ok(MetricValue::Defined(value))
}

/// Number of discordant pairs between two rankings.
pub fn discordant_pairs(sigma: &Permutation, tau: &Permutation) -> Result<u64> {
    Ok(pair_counts(sigma.as_slice(), tau.as_slice())?.discordant)
}

/// `(concordant - discordant) / C(n, 2)`.
pub fn kendall_tau(sigma: &Permutation, tau: &Permutation) -> Result<f64> {
    check_same_len(sigma.len(), tau.len())?;
    require_pairs("kendall_tau", sigma.len())?;
    Ok(tau_from_counts(pair_counts(sigma.as_slice(), tau.as_slice())?))
}

/// The discordant-pair count, a distance on `S_n`.
pub fn kendall_distance(sigma: &Permutation, tau: &Permutation) -> Result<u64> {
    discordant_pairs(sigma, tau)
}

/// `1 - 6 Σ d_i² / (n (n² - 1))` with `d_i = σ(i) - τ(i)`.
pub fn spearman_rho(sigma: &Permutation, tau: &Permutation) -> Result<f64> {
    check_same_len(sigma.len(), tau.len())?;
    require_pairs("spearman_rho", sigma.len())?;
    Ok(spearman_scores(sigma.as_slice(), tau.as_slice()))
}

pub fn ndpm(sigma: &Permutation, tau: &Permutation) -> Result<f64> {
    check_same_len(sigma.len(), tau.len())?;
    require_pairs("ndpm", sigma.len())?;
    Ok(ndpm_from_counts(pair_counts(sigma.as_slice(), tau.as_slice())?))
}
