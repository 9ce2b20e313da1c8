//! Monte Carlo estimation of agreement ratios between metrics.
//!
//! Two metrics are inconsistent on a pair `(μ, ν)` when, relative to the
//! reference `σ`, one of them strictly prefers `μ` while the other strictly
//! prefers `ν`. The agreement ratio is the fraction of sampled pairs on which
//! this does not happen.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{evaluate, EvalConfig, MetricId, MetricValue};
use crate::perm::{check_same_len, sample_uniform, Permutation};
use crate::rng::{derive_seed, stream_rng, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementConfig {
    pub n: usize,
    /// Reference ranking `σ`.
    pub reference: Permutation,
    /// Size of the sampled set `T`.
    pub sample_rankings: usize,
    /// Number of distinct unordered pairs drawn from `T`.
    pub sample_pairs: usize,
    pub seed: u64,
    pub eval: EvalConfig,
}

impl AgreementConfig {
    /// Defaults for length `n`: identity reference, 10000 rankings, 100000
    /// pairs and the default relevance sizes.
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            reference: Permutation::identity(n)?,
            sample_rankings: 10_000,
            sample_pairs: 100_000,
            seed: DEFAULT_SEED,
            eval: EvalConfig::default_for(n),
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_same_len(self.n, self.reference.len())?;
        if self.sample_rankings < 2 {
            return Err(Error::Config("sample_rankings must be at least 2".into()));
        }
        if self.sample_pairs == 0 {
            return Err(Error::Config("sample_pairs must be at least 1".into()));
        }
        let available = pair_total(self.sample_rankings);
        if self.sample_pairs as u64 > available {
            return Err(Error::Config(format!(
                "sample_pairs = {} exceeds the {available} distinct pairs of {} rankings",
                self.sample_pairs, self.sample_rankings
            )));
        }
        self.eval.relevance.validate(self.n)
    }
}

impl Default for AgreementConfig {
    fn default() -> Self {
        Self::new(100).expect("n = 100 is valid")
    }
}

fn pair_total(pool: usize) -> u64 {
    let pool = pool as u64;
    pool * pool.saturating_sub(1) / 2
}

/// Outcome of the consistency test on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    /// One of the four values was undefined.
    Skipped,
}

fn oriented(id: MetricId, v: MetricValue) -> MetricValue {
    let orientation = id.descriptor().orientation;
    v.map(|x| orientation.normalize(x))
}

fn compare(mu: MetricValue, nu: MetricValue) -> Option<Ordering> {
    match (mu, nu) {
        (MetricValue::Defined(a), MetricValue::Defined(b)) => a.partial_cmp(&b),
        _ => None,
    }
}

fn classify(a: Option<Ordering>, b: Option<Ordering>) -> Consistency {
    match (a, b) {
        (Some(x), Some(y)) if x == y.reverse() && x != Ordering::Equal => Consistency::Inconsistent,
        (Some(_), Some(_)) => Consistency::Consistent,
        _ => Consistency::Skipped,
    }
}

/// Consistency of `m1` and `m2` on `(mu, nu)` relative to `sigma`. Ties count
/// as consistent.
pub fn pair_consistent(
    m1: MetricId,
    m2: MetricId,
    sigma: &Permutation,
    mu: &Permutation,
    nu: &Permutation,
    cfg: &EvalConfig,
) -> Result<Consistency> {
    check_same_len(sigma.len(), mu.len())?;
    check_same_len(sigma.len(), nu.len())?;
    let value = |m: MetricId, p: &Permutation| evaluate(m, sigma, p, cfg).map(|v| oriented(m, v));
    let a = compare(value(m1, mu)?, value(m1, nu)?);
    let b = compare(value(m2, mu)?, value(m2, nu)?);
    Ok(classify(a, b))
}

/// Draws `count` distinct unordered index pairs `(a, b)`, `a < b < pool`.
pub fn sample_pairs(count: usize, pool: usize, seed: u64) -> Result<Vec<(u32, u32)>> {
    let total = pair_total(pool);
    if count as u64 > total {
        return Err(Error::Config(format!(
            "cannot draw {count} distinct pairs from {pool} rankings"
        )));
    }
    let mut rng = stream_rng(derive_seed(seed, "pairs"), 0);
    if 2 * count as u64 > total {
        let mut all: Vec<(u32, u32)> = (0..pool as u32)
            .flat_map(|a| (a + 1..pool as u32).map(move |b| (a, b)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(count);
        return Ok(all);
    }
    let mut seen = HashSet::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let a = rng.random_range(0..pool as u32);
        let b = rng.random_range(0..pool as u32);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if seen.insert(pair) {
            pairs.push(pair);
        }
    }
    Ok(pairs)
}

/// Agreement estimate for one metric pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub metric_a: MetricId,
    pub metric_b: MetricId,
    /// `None` when every pair was skipped.
    pub ratio: Option<f64>,
    pub pairs_consistent: u64,
    pub pairs_evaluated: u64,
    pub pairs_skipped_undefined: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    consistent: u64,
    evaluated: u64,
    skipped: u64,
}

/// Pairwise agreement over one shared sampling campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementMatrix {
    metrics: Vec<MetricId>,
    counts: Vec<Counts>,
    seed: u64,
}

impl AgreementMatrix {
    pub fn metrics(&self) -> &[MetricId] {
        &self.metrics
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    fn cell(&self, a: usize, b: usize) -> Counts {
        self.counts[a * self.metrics.len() + b]
    }

    pub fn ratio(&self, a: usize, b: usize) -> Option<f64> {
        let c = self.cell(a, b);
        (c.evaluated > 0).then(|| c.consistent as f64 / c.evaluated as f64)
    }

    pub fn report(&self, a: usize, b: usize) -> AgreementReport {
        let c = self.cell(a, b);
        AgreementReport {
            metric_a: self.metrics[a],
            metric_b: self.metrics[b],
            ratio: self.ratio(a, b),
            pairs_consistent: c.consistent,
            pairs_evaluated: c.evaluated,
            pairs_skipped_undefined: c.skipped,
            seed: self.seed,
        }
    }
}

/// Agreement ratios for every pair of `metrics`, all estimated from the same
/// sampled rankings and pairs.
pub fn agreement_matrix(metrics: &[MetricId], cfg: &AgreementConfig) -> Result<AgreementMatrix> {
    cfg.validate()?;
    let rankings = sample_uniform(cfg.n, cfg.sample_rankings, cfg.seed)?;
    let pairs = sample_pairs(cfg.sample_pairs, cfg.sample_rankings, cfg.seed)?;
    let values: Vec<Vec<MetricValue>> = metrics
        .par_iter()
        .map(|&m| {
            rankings
                .iter()
                .map(|p| evaluate(m, &cfg.reference, p, &cfg.eval).map(|v| oriented(m, v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let orderings: Vec<Vec<Option<Ordering>>> = values
        .par_iter()
        .map(|vals| {
            pairs
                .iter()
                .map(|&(p, q)| compare(vals[p as usize], vals[q as usize]))
                .collect()
        })
        .collect();

    let k = metrics.len();
    let upper: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
    let tallies: Vec<Counts> = upper
        .par_iter()
        .map(|&(a, b)| {
            let mut c = Counts::default();
            for (x, y) in orderings[a].iter().zip(&orderings[b]) {
                match classify(*x, *y) {
                    Consistency::Consistent => {
                        c.consistent += 1;
                        c.evaluated += 1;
                    }
                    Consistency::Inconsistent => c.evaluated += 1,
                    Consistency::Skipped => c.skipped += 1,
                }
            }
            c
        })
        .collect();
    let mut counts = vec![Counts::default(); k * k];
    for (&(a, b), c) in upper.iter().zip(tallies) {
        counts[a * k + b] = c;
        counts[b * k + a] = c;
    }
    Ok(AgreementMatrix {
        metrics: metrics.to_vec(),
        counts,
        seed: cfg.seed,
    })
}

pub fn agreement_ratio(m1: MetricId, m2: MetricId, cfg: &AgreementConfig) -> Result<AgreementReport> {
    Ok(agreement_matrix(&[m1, m2], cfg)?.report(0, 1))
}
