//! Mechanical checks of metric properties.
//!
//! Small-`n` properties (identity of indiscernibles, symmetry, width-swap
//! dependency, sensitivity, distance axioms) are decided by exhaustive search
//! over `S_n`. Robustness, stability and agreement bounds follow seeded
//! sampling protocols.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metrics::{
    evaluate, evaluate_at_k, Arity, ErrorScale, EvalConfig, MetricId, MetricValue, RelevanceConfig,
};
use crate::perm::{enumerate_with_limit, sample_one, Permutation, SwapSpec, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::rng::{derive_seed, stream_rng, DEFAULT_SEED};

macro_rules! property_ids {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PropertyId {
            $($variant),+
        }

        impl PropertyId {
            pub const ALL: &'static [PropertyId] = &[$(PropertyId::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(PropertyId::$variant => $name),+
                }
            }
        }

        impl FromStr for PropertyId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok(PropertyId::$variant),)+
                    other => Err(Error::UnknownProperty(other.to_string())),
                }
            }
        }
    };
}

property_ids! {
    Ioi => "ioi",
    Symmetry => "symmetry",
    Robustness1 => "robustness_1",
    Robustness2 => "robustness_2",
    Wsd => "wsd",
    Sensitivity => "sensitivity",
    Stability => "stability",
    Distance => "distance",
    AgreementBounds => "agreement_bounds",
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How many swaps each sampled pair receives in the type-I robustness protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapSampling {
    /// This many ordered index pairs `(i, j)` drawn uniformly from `{1..n}²`.
    Count(usize),
    /// Every ordered index pair, `n²` in total.
    All,
}

impl fmt::Display for SwapSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapSampling::Count(c) => write!(f, "{c}"),
            SwapSampling::All => f.write_str("all"),
        }
    }
}

impl FromStr for SwapSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(SwapSampling::All),
            other => other.parse().map(SwapSampling::Count).map_err(|_| Error::Parse {
                input: other.to_string(),
                reason: "expected a swap count or 'all'".into(),
            }),
        }
    }
}

/// Rounding of the type-I robustness average before it is compared with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingMode {
    /// Drop the digits after the kept decimals.
    #[default]
    Truncate,
    HalfAwayFromZero,
}

impl RoundingMode {
    pub fn apply(self, x: f64, decimals: u32) -> f64 {
        let scale = 10f64.powi(decimals as i32);
        match self {
            RoundingMode::Truncate => (x * scale).trunc() / scale,
            RoundingMode::HalfAwayFromZero => (x * scale).round() / scale,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RoundingMode::Truncate => "truncate",
            RoundingMode::HalfAwayFromZero => "half_away_from_zero",
        }
    }
}

impl FromStr for RoundingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "truncate" => Ok(RoundingMode::Truncate),
            "half_away_from_zero" | "half" => Ok(RoundingMode::HalfAwayFromZero),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected 'truncate' or 'half_away_from_zero'".into(),
            }),
        }
    }
}

/// Sizes of the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveSizes {
    pub ioi: usize,
    pub symmetry: usize,
    pub wsd: usize,
    pub sensitivity: usize,
    pub distance: usize,
}

impl Default for ExhaustiveSizes {
    fn default() -> Self {
        Self {
            ioi: 6,
            symmetry: 6,
            wsd: 8,
            sensitivity: 6,
            distance: 4,
        }
    }
}

const MAX_DISTANCE_N: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Ranking length of the sampling protocols.
    pub n: usize,
    /// Sampled pairs for robustness-I, stability and agreement bounds.
    pub pair_count: usize,
    pub swap_samples: SwapSampling,
    pub pass_fraction: f64,
    pub decimals: u32,
    pub rounding: RoundingMode,
    pub exhaustive: ExhaustiveSizes,
    pub exhaustive_limit: usize,
    /// Sampled triples for robustness-II.
    pub triples: usize,
    pub tolerance: f64,
    pub bounds_lengths: Vec<usize>,
    pub seed: u64,
    /// Relevant/retrieved sizes; `None` picks [`RelevanceConfig::default_for`]
    /// at each length. Explicit sizes are capped at the length in use.
    pub relevance: Option<RelevanceConfig>,
    pub error_scale: ErrorScale,
    pub f_beta: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            n: 100,
            pair_count: 1000,
            swap_samples: SwapSampling::Count(50),
            pass_fraction: 0.975,
            decimals: 2,
            rounding: RoundingMode::Truncate,
            exhaustive: ExhaustiveSizes::default(),
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            triples: 1000,
            tolerance: 1e-9,
            bounds_lengths: vec![5, 10, 20],
            seed: DEFAULT_SEED,
            relevance: None,
            error_scale: ErrorScale::Sum,
            f_beta: 1.0,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n < 2 {
            return fail(format!("n = {} is too short; need at least 2", self.n));
        }
        if !(self.pass_fraction > 0.0 && self.pass_fraction <= 1.0) {
            return fail(format!("pass_fraction = {} is outside (0, 1]", self.pass_fraction));
        }
        let e = &self.exhaustive;
        for (name, size) in [
            ("ioi", e.ioi),
            ("symmetry", e.symmetry),
            ("wsd", e.wsd),
            ("sensitivity", e.sensitivity),
            ("distance", e.distance),
        ] {
            if size < 2 || size > self.exhaustive_limit {
                return fail(format!(
                    "exhaustive size {name} = {size} must lie in 2..={}",
                    self.exhaustive_limit
                ));
            }
        }
        if e.distance > MAX_DISTANCE_N {
            return fail(format!("distance size {} exceeds {MAX_DISTANCE_N}", e.distance));
        }
        if self.bounds_lengths.is_empty() || self.bounds_lengths.iter().any(|&l| l < 2) {
            return fail("bounds lengths must be non-empty and at least 2".into());
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return fail("tolerance must be non-negative".into());
        }
        Ok(())
    }

    /// Evaluation settings at length `n`.
    pub fn eval_config(&self, n: usize) -> EvalConfig {
        let relevance = match self.relevance {
            Some(r) => RelevanceConfig::new(r.relevant.min(n), r.retrieved.min(n)),
            None => RelevanceConfig::default_for(n),
        };
        EvalConfig {
            relevance,
            error_scale: self.error_scale,
            f_beta: self.f_beta,
        }
    }

    /// Every field as `key = value` lines in a fixed order.
    pub fn canonical(&self) -> String {
        let e = &self.exhaustive;
        let relevance = match self.relevance {
            Some(r) => format!("{},{}", r.relevant, r.retrieved),
            None => "auto".into(),
        };
        let lengths: Vec<String> = self.bounds_lengths.iter().map(|l| l.to_string()).collect();
        let scale = match self.error_scale {
            ErrorScale::Sum => "sum",
            ErrorScale::Mean => "mean",
        };
        [
            format!("n = {}", self.n),
            format!("pairs = {}", self.pair_count),
            format!("swap_samples = {}", self.swap_samples),
            format!("pass_fraction = {}", self.pass_fraction),
            format!("decimals = {}", self.decimals),
            format!("rounding = {}", self.rounding.name()),
            format!("exhaustive_ioi = {}", e.ioi),
            format!("exhaustive_symmetry = {}", e.symmetry),
            format!("exhaustive_wsd = {}", e.wsd),
            format!("exhaustive_sensitivity = {}", e.sensitivity),
            format!("exhaustive_distance = {}", e.distance),
            format!("exhaustive_limit = {}", self.exhaustive_limit),
            format!("triples = {}", self.triples),
            format!("tolerance = {:e}", self.tolerance),
            format!("bounds_lengths = {}", lengths.join(",")),
            format!("seed = {}", self.seed),
            format!("relevance = {relevance}"),
            format!("error_scale = {scale}"),
            format!("f_beta = {}", self.f_beta),
        ]
        .join("\n")
            + "\n"
    }

    /// Assigns one key of the [`ProtocolConfig::canonical`] form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.trim().parse().map_err(|_| Error::Parse {
                input: value.to_string(),
                reason: format!("{key} expects a number"),
            })
        }
        let e = &mut self.exhaustive;
        match key {
            "n" => self.n = num(key, value)?,
            "pairs" => self.pair_count = num(key, value)?,
            "swap_samples" => self.swap_samples = value.parse()?,
            "pass_fraction" => self.pass_fraction = num(key, value)?,
            "decimals" => self.decimals = num(key, value)?,
            "rounding" => self.rounding = value.parse()?,
            "exhaustive_ioi" => e.ioi = num(key, value)?,
            "exhaustive_symmetry" => e.symmetry = num(key, value)?,
            "exhaustive_wsd" => e.wsd = num(key, value)?,
            "exhaustive_sensitivity" => e.sensitivity = num(key, value)?,
            "exhaustive_distance" => e.distance = num(key, value)?,
            "exhaustive_limit" => self.exhaustive_limit = num(key, value)?,
            "triples" => self.triples = num(key, value)?,
            "tolerance" => self.tolerance = num(key, value)?,
            "bounds_lengths" => {
                self.bounds_lengths = value
                    .split(',')
                    .map(|v| num(key, v))
                    .collect::<Result<_>>()?
            }
            "seed" => self.seed = num(key, value)?,
            "relevance" => {
                self.relevance = match value.trim() {
                    "auto" => None,
                    v => {
                        let parts: Vec<usize> = v.split(',').map(|p| num(key, p)).collect::<Result<_>>()?;
                        match parts[..] {
                            [size] => Some(RelevanceConfig::symmetric(size)),
                            [relevant, retrieved] => Some(RelevanceConfig::new(relevant, retrieved)),
                            _ => {
                                return Err(Error::Parse {
                                    input: v.to_string(),
                                    reason: "relevance expects 'auto', 'j' or 'j,k'".into(),
                                })
                            }
                        }
                    }
                }
            }
            "error_scale" => {
                self.error_scale = match value.trim() {
                    "sum" => ErrorScale::Sum,
                    "mean" => ErrorScale::Mean,
                    v => {
                        return Err(Error::Parse {
                            input: v.to_string(),
                            reason: "error_scale expects 'sum' or 'mean'".into(),
                        })
                    }
                }
            }
            "f_beta" => self.f_beta = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown protocol key {key:?}"))),
        }
        Ok(())
    }

    /// SHA-256 of [`ProtocolConfig::canonical`], in hex.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn cell_seed(&self, metric: MetricId, property: PropertyId) -> u64 {
        derive_seed(self.seed, &format!("{metric}/{property}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Undefined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undefined => "undef",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concrete tuple of rankings and the metric values observed on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub label: String,
    pub rankings: Vec<Permutation>,
    pub values: Vec<MetricValue>,
}

impl Witness {
    fn new(label: impl Into<String>, rankings: Vec<Permutation>, values: Vec<MetricValue>) -> Self {
        Self {
            label: label.into(),
            rankings,
            values,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rankings: Vec<String> = self.rankings.iter().map(|p| p.to_string()).collect();
        let values: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}: {} -> {}", self.label, rankings.join(" | "), values.join(", "))
    }
}

const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub metric: MetricId,
    pub property: PropertyId,
    pub verdict: Verdict,
    /// Ranking length the check ran at.
    pub n: usize,
    pub witnesses: Vec<Witness>,
    pub statistic: Option<f64>,
    /// Named sub-checks and their outcomes.
    pub checks: Vec<(&'static str, bool)>,
    pub detail: String,
    /// Set when the expected verdict for this cell is disputed.
    pub ambiguity: Option<&'static str>,
    pub config_hash: String,
}

impl PropertyReport {
    fn new(metric: MetricId, property: PropertyId, n: usize, cfg: &ProtocolConfig) -> Self {
        Self {
            metric,
            property,
            verdict: Verdict::Undefined,
            n,
            witnesses: Vec::new(),
            statistic: None,
            checks: Vec::new(),
            detail: String::new(),
            ambiguity: ambiguity(metric, property),
            config_hash: cfg.config_hash(),
        }
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

/// Cells whose expected verdict is contested.
pub fn ambiguity(metric: MetricId, property: PropertyId) -> Option<&'static str> {
    use MetricId::*;
    match (metric, property) {
        (Ndpm, PropertyId::Sensitivity) => {
            Some("ndpm is width-swap dependent, which rules out sensitivity, yet it is listed as sensitive")
        }
        (Ndpm, PropertyId::Robustness2) => {
            Some("ndpm depends only on pair signs and is invariant under relabeling, yet it is listed as not invariant")
        }
        (Mse | Rmse | Mae | Rmae, PropertyId::Stability) => {
            Some("the verdict depends on whether errors are mean-normalized")
        }
        _ => None,
    }
}

/// Equality up to `tol`, relative for magnitudes above one. Undefined equals
/// undefined.
fn close(a: MetricValue, b: MetricValue, tol: f64) -> bool {
    match (a, b) {
        (MetricValue::Defined(x), MetricValue::Defined(y)) => {
            (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
        }
        (MetricValue::Undefined, MetricValue::Undefined) => true,
        _ => false,
    }
}

fn close_abs(a: MetricValue, b: MetricValue, tol: f64) -> bool {
    match (a, b) {
        (MetricValue::Defined(x), MetricValue::Defined(y)) => (x - y).abs() <= tol,
        (MetricValue::Undefined, MetricValue::Undefined) => true,
        _ => false,
    }
}

fn is_arity_one(metric: MetricId) -> bool {
    metric.descriptor().arity == Arity::One
}

/// Runs one check.
pub fn check(metric: MetricId, property: PropertyId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    match property {
        PropertyId::Ioi => check_ioi(metric, cfg),
        PropertyId::Symmetry => check_symmetry(metric, cfg),
        PropertyId::Robustness1 => check_robustness_1(metric, cfg),
        PropertyId::Robustness2 => check_robustness_2(metric, cfg),
        PropertyId::Wsd => check_wsd(metric, cfg),
        PropertyId::Sensitivity => check_sensitivity(metric, cfg),
        PropertyId::Stability => check_stability(metric, cfg),
        PropertyId::Distance => {
            let f = grid_distance_function(metric);
            check_distance_axioms(f.as_ref(), cfg.exhaustive.distance, cfg)
        }
        PropertyId::AgreementBounds => check_agreement_bounds(metric, cfg),
    }
}

/// Injectivity of `τ ↦ m(id, τ)` over `S_n` (values within the tolerance
/// count as equal).
pub fn check_ioi(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.exhaustive.ioi;
    let perms = enumerate_with_limit(n, cfg.exhaustive_limit)?;
    let id = Permutation::identity(n)?;
    let ecfg = cfg.eval_config(n);
    let mut values: Vec<(MetricValue, usize)> = perms
        .par_iter()
        .enumerate()
        .map(|(i, p)| evaluate(metric, &id, p, &ecfg).map(|v| (v, i)))
        .collect::<Result<_>>()?;
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut report = PropertyReport::new(metric, PropertyId::Ioi, n, cfg);
    let mut ties = 0usize;
    for w in values.windows(2) {
        if close(w[0].0, w[1].0, cfg.tolerance) {
            ties += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                let (a, b) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                report.witnesses.push(Witness::new(
                    "equal values",
                    vec![perms[a].clone(), perms[b].clone()],
                    vec![values_of(&values, a), values_of(&values, b)],
                ));
            }
        }
    }
    report.verdict = Verdict::from_bool(ties == 0);
    report.statistic = Some(ties as f64);
    report.detail = format!("{} rankings, {ties} adjacent ties", perms.len());
    Ok(report)
}

fn values_of(values: &[(MetricValue, usize)], index: usize) -> MetricValue {
    values.iter().find(|(_, i)| *i == index).map(|(v, _)| *v).expect("index present")
}

/// `m(σ, ν) = m(ν, σ)` over all pairs of `S_n`. Arity-one metrics fail by
/// convention.
pub fn check_symmetry(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.exhaustive.symmetry;
    let mut report = PropertyReport::new(metric, PropertyId::Symmetry, n, cfg);
    if is_arity_one(metric) {
        report.verdict = Verdict::Fail;
        report.detail = "single-input metric: fails by convention".into();
        return Ok(report);
    }
    let perms = enumerate_with_limit(n, cfg.exhaustive_limit)?;
    let ecfg = cfg.eval_config(n);
    let found: Vec<Vec<Witness>> = (0..perms.len())
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in a + 1..perms.len() {
                let ab = evaluate(metric, &perms[a], &perms[b], &ecfg)?;
                let ba = evaluate(metric, &perms[b], &perms[a], &ecfg)?;
                if !ab.same_as(ba) {
                    out.push(Witness::new(
                        "m(a, b) != m(b, a)",
                        vec![perms[a].clone(), perms[b].clone()],
                        vec![ab, ba],
                    ));
                    if out.len() == MAX_WITNESSES {
                        break;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    report.witnesses = found.into_iter().flatten().take(MAX_WITNESSES).collect();
    report.verdict = Verdict::from_bool(report.witnesses.is_empty());
    report.detail = format!("{} ordered pairs", perms.len() * (perms.len() - 1));
    Ok(report)
}

fn robustness_swaps(n: usize, sampling: SwapSampling, seed: u64, pair: u64) -> Vec<(usize, usize)> {
    match sampling {
        SwapSampling::All => (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect(),
        SwapSampling::Count(count) => {
            let mut rng = stream_rng(seed, pair);
            (0..count)
                .map(|_| (rng.random_range(1..=n), rng.random_range(1..=n)))
                .collect()
        }
    }
}

/// Average of `|m(σ, ν) − m(σ, ν ∘ (i j))|` over sampled pairs and swaps,
/// rounded; passes when the rounded average is zero.
pub fn check_robustness_1(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.n;
    let ecfg = cfg.eval_config(n);
    let seed = cfg.cell_seed(metric, PropertyId::Robustness1);
    let (pair_seed, swap_seed) = (derive_seed(seed, "pairs"), derive_seed(seed, "swaps"));
    let per_pair: Vec<(f64, u64, u64)> = (0..cfg.pair_count as u64)
        .into_par_iter()
        .map(|p| {
            let sigma = sample_one(n, pair_seed, 2 * p)?;
            let nu = sample_one(n, pair_seed, 2 * p + 1)?;
            let base = evaluate(metric, &sigma, &nu, &ecfg)?;
            let swaps = robustness_swaps(n, cfg.swap_samples, swap_seed, p);
            let Some(base) = base.value() else {
                return Ok((0.0, 0, swaps.len() as u64));
            };
            let (mut sum, mut used, mut skipped) = (0.0, 0u64, 0u64);
            for (i, j) in swaps {
                let swapped = if i == j {
                    nu.clone()
                } else {
                    nu.swap_positions(SwapSpec::new(i, j)?)?
                };
                match evaluate(metric, &sigma, &swapped, &ecfg)?.value() {
                    Some(v) => {
                        sum += (v - base).abs();
                        used += 1;
                    }
                    None => skipped += 1,
                }
            }
            Ok((sum, used, skipped))
        })
        .collect::<Result<_>>()?;
    let (sum, used, skipped) = per_pair
        .iter()
        .fold((0.0, 0u64, 0u64), |acc, &(s, u, k)| (acc.0 + s, acc.1 + u, acc.2 + k));
    let mut report = PropertyReport::new(metric, PropertyId::Robustness1, n, cfg);
    if used == 0 {
        report.detail = format!("every comparison undefined ({skipped} skipped)");
        return Ok(report);
    }
    let mean = sum / used as f64;
    let rounded = cfg.rounding.apply(mean, cfg.decimals);
    report.verdict = Verdict::from_bool(rounded == 0.0);
    report.statistic = Some(rounded);
    report.detail = format!(
        "mean |change| = {mean:.6e} over {used} comparisons, {skipped} skipped; {} to {} decimals = {rounded:.*}",
        cfg.rounding.name(),
        cfg.decimals,
        cfg.decimals as usize
    );
    Ok(report)
}

/// `m(μ ∘ ν, σ ∘ ν) = m(μ, σ)` within the tolerance on sampled triples;
/// arity-one metrics compare `m(σ ∘ ν)` with `m(σ)`.
pub fn check_robustness_2(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.n;
    let ecfg = cfg.eval_config(n);
    let seed = cfg.cell_seed(metric, PropertyId::Robustness2);
    let id = Permutation::identity(n)?;
    let violations: Vec<Option<Witness>> = (0..cfg.triples as u64)
        .into_par_iter()
        .map(|t| {
            let mu = sample_one(n, seed, 3 * t)?;
            let sigma = sample_one(n, seed, 3 * t + 1)?;
            let nu = sample_one(n, seed, 3 * t + 2)?;
            let (lhs, rhs, rankings) = if is_arity_one(metric) {
                let lhs = evaluate(metric, &id, &sigma.compose(&nu)?, &ecfg)?;
                let rhs = evaluate(metric, &id, &sigma, &ecfg)?;
                (lhs, rhs, vec![sigma, nu])
            } else {
                let lhs = evaluate(metric, &mu.compose(&nu)?, &sigma.compose(&nu)?, &ecfg)?;
                let rhs = evaluate(metric, &mu, &sigma, &ecfg)?;
                (lhs, rhs, vec![mu, sigma, nu])
            };
            Ok((!close_abs(lhs, rhs, cfg.tolerance)).then(|| {
                Witness::new("relabeled value differs", rankings, vec![lhs, rhs])
            }))
        })
        .collect::<Result<_>>()?;
    let count = violations.iter().flatten().count();
    let mut report = PropertyReport::new(metric, PropertyId::Robustness2, n, cfg);
    report.witnesses = violations.into_iter().flatten().take(MAX_WITNESSES).collect();
    report.verdict = Verdict::from_bool(count == 0);
    report.statistic = Some(count as f64);
    report.detail = format!("{count} of {} triples violate invariance", cfg.triples);
    Ok(report)
}

/// Equal-width swaps from the identity must receive bit-identical values.
pub fn check_wsd(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.exhaustive.wsd;
    if n > cfg.exhaustive_limit {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: cfg.exhaustive_limit,
        });
    }
    let id = Permutation::identity(n)?;
    let ecfg = cfg.eval_config(n);
    let mut report = PropertyReport::new(metric, PropertyId::Wsd, n, cfg);
    for width in 1..n {
        let swaps: Vec<Permutation> = SwapSpec::all_of_width(n, width)
            .map(|s| id.swap_positions(s))
            .collect::<Result<_>>()?;
        let values: Vec<MetricValue> = swaps
            .iter()
            .map(|s| evaluate(metric, &id, s, &ecfg))
            .collect::<Result<_>>()?;
        if let Some(last) = (1..values.len()).rev().find(|&i| !values[i].same_as(values[0])) {
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(Witness::new(
                    format!("width {width}"),
                    vec![swaps[0].clone(), swaps[last].clone()],
                    vec![values[0], values[last]],
                ));
            }
        }
    }
    report.verdict = Verdict::from_bool(report.witnesses.is_empty());
    report.detail = format!("widths 1..{}", n - 1);
    Ok(report)
}

/// Equal-width disjoint swap pairs `(i j)`, `(k l)` with `i < j < k < l`.
fn disjoint_swap_pairs(n: usize) -> Vec<(SwapSpec, SwapSpec)> {
    let mut out = Vec::new();
    for width in 1..n {
        for i in 1..=n {
            for k in i + width + 1..=n {
                if k + width <= n {
                    out.push((
                        SwapSpec { i, j: i + width },
                        SwapSpec { i: k, j: k + width },
                    ));
                }
            }
        }
    }
    out
}

/// Searches `sigmas` for `(σ, (i j), (k l))` on which `m(σ, (i j) ∘ σ)` and
/// `m(σ, (k l) ∘ σ)` differ; arity-one metrics compare `m((i j) ∘ σ)` with
/// `m((k l) ∘ σ)`.
pub fn find_sensitivity_witness(
    metric: MetricId,
    sigmas: &[Permutation],
    ecfg: &EvalConfig,
    tol: f64,
) -> Result<Option<Witness>> {
    let Some(n) = sigmas.first().map(Permutation::len) else {
        return Ok(None);
    };
    let pairs = disjoint_swap_pairs(n);
    let id = Permutation::identity(n)?;
    let found: Vec<Option<Witness>> = sigmas
        .par_iter()
        .map(|sigma| {
            let reference = if is_arity_one(metric) { &id } else { sigma };
            for &(a, b) in &pairs {
                let (pa, pb) = (sigma.swap_values(a)?, sigma.swap_values(b)?);
                let va = evaluate(metric, reference, &pa, ecfg)?;
                let vb = evaluate(metric, reference, &pb, ecfg)?;
                if !close(va, vb, tol) {
                    let label = format!("({} {}) vs ({} {})", a.i, a.j, b.i, b.j);
                    return Ok(Some(Witness::new(label, vec![sigma.clone(), pa, pb], vec![va, vb])));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().next())
}

/// Passes when some ranking and pair of equal-width disjoint swaps composed on
/// the left receive different values.
pub fn check_sensitivity(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.exhaustive.sensitivity;
    let perms = enumerate_with_limit(n, cfg.exhaustive_limit)?;
    let ecfg = cfg.eval_config(n);
    let mut report = PropertyReport::new(metric, PropertyId::Sensitivity, n, cfg);
    let witness = find_sensitivity_witness(metric, &perms, &ecfg, cfg.tolerance)?;
    report.verdict = Verdict::from_bool(witness.is_some());
    report.detail = match &witness {
        Some(_) => "witness found".into(),
        None => format!("no witness over all of S_{n}"),
    };
    report.witnesses.extend(witness);
    Ok(report)
}

/// Fraction of `(pair, k)` cases, `k ∈ 2..=n`, with `|m@(k−1) − m@k| < 1/k`.
pub fn check_stability(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let n = cfg.n;
    let mut report = PropertyReport::new(metric, PropertyId::Stability, n, cfg);
    if !metric.descriptor().supports_at_k {
        report.detail = "no @k variant".into();
        return Ok(report);
    }
    let ecfg = cfg.eval_config(n);
    let seed = cfg.cell_seed(metric, PropertyId::Stability);
    let per_pair: Vec<(u64, u64, u64)> = (0..cfg.pair_count as u64)
        .into_par_iter()
        .map(|p| {
            let sigma = sample_one(n, seed, 2 * p)?;
            let nu = sample_one(n, seed, 2 * p + 1)?;
            let at: Vec<MetricValue> = (1..=n)
                .map(|k| evaluate_at_k(metric, &sigma, &nu, k, &ecfg).unwrap_or(MetricValue::Undefined))
                .collect();
            let (mut passed, mut evaluated, mut skipped) = (0, 0, 0);
            for k in 2..=n {
                match (at[k - 2].value(), at[k - 1].value()) {
                    (Some(prev), Some(cur)) => {
                        evaluated += 1;
                        if (cur - prev).abs() < 1.0 / k as f64 {
                            passed += 1;
                        }
                    }
                    _ => skipped += 1,
                }
            }
            Ok((passed, evaluated, skipped))
        })
        .collect::<Result<_>>()?;
    let (passed, evaluated, skipped) = per_pair
        .iter()
        .fold((0, 0, 0), |a, &(p, e, s)| (a.0 + p, a.1 + e, a.2 + s));
    if evaluated == 0 {
        report.detail = format!("every case undefined ({skipped} skipped)");
        return Ok(report);
    }
    let fraction = passed as f64 / evaluated as f64;
    report.verdict = Verdict::from_bool(fraction >= cfg.pass_fraction);
    report.statistic = Some(fraction);
    report.detail = format!(
        "{passed} of {evaluated} cases within 1/k, {skipped} skipped; threshold {}",
        cfg.pass_fraction
    );
    Ok(report)
}

/// A two-argument function on rankings, checked against the distance axioms.
pub trait PairFunction: Sync {
    fn metric(&self) -> MetricId;
    fn label(&self) -> String;
    fn eval(&self, a: &Permutation, b: &Permutation, cfg: &EvalConfig) -> Result<MetricValue>;
}

impl PairFunction for MetricId {
    fn metric(&self) -> MetricId {
        *self
    }

    fn label(&self) -> String {
        self.name().to_string()
    }

    fn eval(&self, a: &Permutation, b: &Permutation, cfg: &EvalConfig) -> Result<MetricValue> {
        evaluate(*self, a, b, cfg)
    }
}

/// `f_m(σ, ν) = m(σ) − m(ν)`, or its absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedDistance {
    metric: MetricId,
    absolute: bool,
}

pub fn induced_distance(metric: MetricId, absolute: bool) -> Result<InducedDistance> {
    if !is_arity_one(metric) {
        return Err(Error::Unsupported {
            metric: metric.name(),
            reason: "induced distances need a single-input metric",
        });
    }
    Ok(InducedDistance { metric, absolute })
}

impl PairFunction for InducedDistance {
    fn metric(&self) -> MetricId {
        self.metric
    }

    fn label(&self) -> String {
        if self.absolute {
            format!("|{0}(a) - {0}(b)|", self.metric)
        } else {
            format!("{0}(a) - {0}(b)", self.metric)
        }
    }

    fn eval(&self, a: &Permutation, b: &Permutation, cfg: &EvalConfig) -> Result<MetricValue> {
        let va = evaluate(self.metric, a, a, cfg)?;
        let vb = evaluate(self.metric, b, b, cfg)?;
        Ok(match (va, vb) {
            (MetricValue::Defined(x), MetricValue::Defined(y)) if self.absolute => MetricValue::Defined((x - y).abs()),
            (MetricValue::Defined(x), MetricValue::Defined(y)) => MetricValue::Defined(x - y),
            _ => MetricValue::Undefined,
        })
    }
}

/// The function the distance row of the grid checks for `metric`: the
/// discordant-pair count for Kendall's τ, the absolute induced distance for
/// single-input metrics, the metric itself otherwise.
pub fn grid_distance_function(metric: MetricId) -> Box<dyn PairFunction> {
    match metric {
        MetricId::KendallTau => Box::new(MetricId::KendallDistance),
        m if is_arity_one(m) => Box::new(InducedDistance {
            metric: m,
            absolute: true,
        }),
        m => Box::new(m),
    }
}

const TRIANGLE_SLACK: f64 = 1e-12;

/// Identity, positivity, symmetry and the triangle inequality over all of `S_n`.
pub fn check_distance_axioms<F: PairFunction + ?Sized>(
    f: &F,
    n: usize,
    cfg: &ProtocolConfig,
) -> Result<PropertyReport> {
    if n > MAX_DISTANCE_N.min(cfg.exhaustive_limit) {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: MAX_DISTANCE_N.min(cfg.exhaustive_limit),
        });
    }
    let perms = enumerate_with_limit(n, cfg.exhaustive_limit)?;
    let ecfg = cfg.eval_config(n);
    let size = perms.len();
    let d: Vec<MetricValue> = (0..size * size)
        .into_par_iter()
        .map(|idx| f.eval(&perms[idx / size], &perms[idx % size], &ecfg))
        .collect::<Result<_>>()?;
    let at = |a: usize, b: usize| d[a * size + b];
    let pair = |a: usize, b: usize| vec![perms[a].clone(), perms[b].clone()];

    let identity = (0..size).find(|&a| !close_abs(at(a, a), MetricValue::Defined(0.0), cfg.tolerance));
    let positivity = (0..size * size).find(|&idx| {
        let (a, b) = (idx / size, idx % size);
        a != b && !matches!(at(a, b), MetricValue::Defined(v) if v > cfg.tolerance)
    });
    let symmetry = (0..size * size).find(|&idx| {
        let (a, b) = (idx / size, idx % size);
        a < b && !close(at(a, b), at(b, a), cfg.tolerance)
    });
    let triangle = (0..size)
        .into_par_iter()
        .map(|x| {
            for y in 0..size {
                for z in 0..size {
                    let (MetricValue::Defined(xz), MetricValue::Defined(xy), MetricValue::Defined(yz)) =
                        (at(x, z), at(x, y), at(y, z))
                    else {
                        return Some((x, y, z));
                    };
                    if xz > xy + yz + TRIANGLE_SLACK * 1f64.max(xy.abs() + yz.abs()) {
                        return Some((x, y, z));
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();

    let mut report = PropertyReport::new(f.metric(), PropertyId::Distance, n, cfg);
    if let Some(a) = identity {
        report.witnesses.push(Witness::new("identity", vec![perms[a].clone()], vec![at(a, a)]));
    }
    if let Some(idx) = positivity {
        let (a, b) = (idx / size, idx % size);
        report.witnesses.push(Witness::new("positivity", pair(a, b), vec![at(a, b)]));
    }
    if let Some(idx) = symmetry {
        let (a, b) = (idx / size, idx % size);
        report.witnesses.push(Witness::new("symmetry", pair(a, b), vec![at(a, b), at(b, a)]));
    }
    if let Some((x, y, z)) = triangle {
        report.witnesses.push(Witness::new(
            "triangle",
            vec![perms[x].clone(), perms[y].clone(), perms[z].clone()],
            vec![at(x, z), at(x, y), at(y, z)],
        ));
    }
    report.checks = vec![
        ("identity", identity.is_none()),
        ("positivity", positivity.is_none()),
        ("symmetry", symmetry.is_none()),
        ("triangle", triangle.is_none()),
    ];
    report.verdict = Verdict::from_bool(report.checks.iter().all(|&(_, ok)| ok));
    report.detail = format!("checked {} on S_{n}", f.label());
    Ok(report)
}

/// Constant self-value `m(σ, σ)` within and across lengths, no sampled pair
/// scoring above it, and sampled values within the metric's stated range.
pub fn check_agreement_bounds(metric: MetricId, cfg: &ProtocolConfig) -> Result<PropertyReport> {
    let seed = cfg.cell_seed(metric, PropertyId::AgreementBounds);
    let orientation = metric.descriptor().orientation;
    let range = metric.descriptor().bounded_range;
    let mut report = PropertyReport::new(
        metric,
        PropertyId::AgreementBounds,
        *cfg.bounds_lengths.iter().max().expect("validated"),
        cfg,
    );
    let (mut constant, mut bounded, mut in_range) = (true, true, true);
    let mut self_values = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &len in &cfg.bounds_lengths {
        let ecfg = cfg.eval_config(len);
        let id = Permutation::identity(len)?;
        let top = evaluate(metric, &id, &id, &ecfg)?;
        self_values.push((id.clone(), top));
        let len_seed = derive_seed(seed, &len.to_string());
        let samples: Vec<(Permutation, Permutation, MetricValue, MetricValue)> = (0..cfg.pair_count as u64)
            .into_par_iter()
            .map(|p| {
                let sigma = sample_one(len, len_seed, 2 * p)?;
                let nu = sample_one(len, len_seed, 2 * p + 1)?;
                let own = evaluate(metric, &sigma, &sigma, &ecfg)?;
                let other = evaluate(metric, &sigma, &nu, &ecfg)?;
                Ok((sigma, nu, own, other))
            })
            .collect::<Result<_>>()?;
        for (sigma, nu, own, other) in samples {
            if constant && !(top.is_defined() && close(own, top, cfg.tolerance)) {
                constant = false;
                report.witnesses.push(Witness::new(
                    format!("self-value varies at n = {len}"),
                    vec![id.clone(), sigma.clone()],
                    vec![top, own],
                ));
            }
            for v in [own, other] {
                if let Some(x) = v.value() {
                    lo = lo.min(x);
                    hi = hi.max(x);
                    if let Some((min, max)) = range {
                        if x < min - cfg.tolerance || x > max + cfg.tolerance {
                            in_range = false;
                        }
                    }
                }
            }
            if let (Some(t), Some(o)) = (top.value(), other.value()) {
                if orientation.normalize(o) > orientation.normalize(t) + cfg.tolerance && bounded {
                    bounded = false;
                    report.witnesses.push(Witness::new(
                        "pair scores above the self-value",
                        vec![sigma, nu],
                        vec![other, top],
                    ));
                }
            }
        }
    }
    let independent = self_values
        .iter()
        .all(|(_, v)| v.is_defined() && close(*v, self_values[0].1, cfg.tolerance));
    if !independent {
        if let Some((p, v)) = self_values.iter().find(|(_, v)| !close(*v, self_values[0].1, cfg.tolerance)) {
            report.witnesses.push(Witness::new(
                "self-value depends on n",
                vec![self_values[0].0.clone(), p.clone()],
                vec![self_values[0].1, *v],
            ));
        }
    }
    report.witnesses.truncate(MAX_WITNESSES);
    report.checks = vec![
        ("constant_self_value", constant),
        ("length_independent", independent),
        ("upper_bound", bounded),
        ("within_range", in_range),
    ];
    report.verdict = Verdict::from_bool(report.checks.iter().all(|&(_, ok)| ok));
    report.statistic = self_values[0].1.value();
    let selfs: Vec<String> = self_values
        .iter()
        .map(|(p, v)| format!("n={}: {v}", p.len()))
        .collect();
    report.detail = format!("self-values [{}]; observed range [{lo}, {hi}]", selfs.join("; "));
    Ok(report)
}

/// Verdict grid, `grid[p][m]` for `properties[p]` and `metrics[m]`. A cell that
/// errors is reported as undefined with the error text.
pub fn property_table(
    metrics: &[MetricId],
    properties: &[PropertyId],
    cfg: &ProtocolConfig,
) -> Vec<Vec<PropertyReport>> {
    let cells: Vec<(PropertyId, MetricId)> = properties
        .iter()
        .flat_map(|&p| metrics.iter().map(move |&m| (p, m)))
        .collect();
    let reports: Vec<PropertyReport> = cells
        .par_iter()
        .map(|&(p, m)| {
            let checked = cfg.validate().and_then(|_| check(m, p, cfg));
            checked.unwrap_or_else(|e| {
                let mut r = PropertyReport::new(m, p, cfg.n, cfg);
                r.detail = format!("error: {e}");
                r
            })
        })
        .collect();
    if metrics.is_empty() {
        return properties.iter().map(|_| Vec::new()).collect();
    }
    reports.chunks(metrics.len()).map(|c| c.to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::swap;

    fn small() -> ProtocolConfig {
        ProtocolConfig {
            n: 30,
            pair_count: 60,
            swap_samples: SwapSampling::Count(10),
            triples: 100,
            exhaustive: ExhaustiveSizes {
                ioi: 5,
                symmetry: 4,
                wsd: 8,
                sensitivity: 5,
                distance: 4,
            },
            ..ProtocolConfig::default()
        }
    }

    fn sw(n: usize, i: usize, j: usize) -> Permutation {
        swap(n, SwapSpec::new(i, j).unwrap()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for &p in PropertyId::ALL {
            assert_eq!(p.name().parse::<PropertyId>().unwrap(), p);
        }
        assert_eq!(PropertyId::ALL.len(), 9);
        assert!("rob1".parse::<PropertyId>().is_err());
        assert_eq!("all".parse::<SwapSampling>().unwrap(), SwapSampling::All);
        assert_eq!("50".parse::<SwapSampling>().unwrap(), SwapSampling::Count(50));
    }

    #[test]
    fn rounding_modes() {
        assert_eq!(RoundingMode::Truncate.apply(0.0099, 2), 0.0);
        assert_eq!(RoundingMode::HalfAwayFromZero.apply(0.0099, 2), 0.01);
        assert_eq!(RoundingMode::Truncate.apply(0.137, 2), 0.13);
    }

    #[test]
    fn config_hash_tracks_fields() {
        let a = ProtocolConfig::default();
        let mut b = a.clone();
        assert_eq!(a.config_hash(), b.config_hash());
        b.seed += 1;
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 64);
        let mut bad = a.clone();
        bad.exhaustive.wsd = 9;
        assert!(bad.validate().is_err());
        let mut bad = a;
        bad.pass_fraction = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn canonical_form_round_trips() {
        let mut a = ProtocolConfig {
            swap_samples: SwapSampling::All,
            rounding: RoundingMode::HalfAwayFromZero,
            relevance: Some(RelevanceConfig::new(3, 4)),
            error_scale: ErrorScale::Mean,
            tolerance: 1e-7,
            bounds_lengths: vec![4, 9],
            ..ProtocolConfig::default()
        };
        a.exhaustive.wsd = 7;
        let mut b = ProtocolConfig::default();
        for line in a.canonical().lines() {
            let (k, v) = line.split_once(" = ").unwrap();
            b.set(k, v).unwrap();
        }
        assert_eq!(a, b);
        assert!(b.set("colour", "red").is_err());
        assert!(b.set("n", "many").is_err());
        b.set("relevance", "5").unwrap();
        assert_eq!(b.relevance, Some(RelevanceConfig::symmetric(5)));
    }

    #[test]
    fn ioi_examples() {
        let mut cfg = small();
        cfg.exhaustive.ioi = 4;
        let r = check_ioi(MetricId::KendallTau, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.witnesses.is_empty());
        for &m in &[MetricId::Dcg, MetricId::Ndcg] {
            assert_eq!(check_ioi(m, &cfg).unwrap().verdict, Verdict::Pass);
        }
        // the two width-1 swaps (1 2) and (3 4) share kendall_tau = 4/6
        let id = Permutation::identity(4).unwrap();
        let ecfg = cfg.eval_config(4);
        let a = evaluate(MetricId::KendallTau, &id, &sw(4, 1, 2), &ecfg).unwrap();
        let b = evaluate(MetricId::KendallTau, &id, &sw(4, 3, 4), &ecfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, MetricValue::Defined(4.0 / 6.0));
    }

    #[test]
    fn ioi_for_precision_at_ten() {
        let mut cfg = small();
        cfg.exhaustive.ioi = 7;
        let r = check_ioi(MetricId::Precision, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // id and (1 2) share precision with j = k = 5 at n = 10
        let ecfg = cfg.eval_config(10);
        assert_eq!(ecfg.relevance, RelevanceConfig::symmetric(5));
        let id = Permutation::identity(10).unwrap();
        assert_eq!(
            evaluate(MetricId::Precision, &id, &id, &ecfg).unwrap(),
            evaluate(MetricId::Precision, &id, &sw(10, 1, 2), &ecfg).unwrap()
        );
    }

    #[test]
    fn symmetry_examples() {
        let cfg = small();
        let v = |m| check_symmetry(m, &cfg).unwrap();
        assert_eq!(v(MetricId::KendallTau).verdict, Verdict::Pass);
        assert_eq!(v(MetricId::Mse).verdict, Verdict::Pass);
        let mape = v(MetricId::Mape);
        assert_eq!(mape.verdict, Verdict::Fail);
        let w = &mape.witnesses[0];
        let ecfg = cfg.eval_config(4);
        let ab = evaluate(MetricId::Mape, &w.rankings[0], &w.rankings[1], &ecfg).unwrap();
        let ba = evaluate(MetricId::Mape, &w.rankings[1], &w.rankings[0], &ecfg).unwrap();
        assert_eq!(vec![ab, ba], w.values);
        let dcg = v(MetricId::Dcg);
        assert_eq!(dcg.verdict, Verdict::Fail);
        assert!(dcg.witnesses.is_empty());
    }

    #[test]
    fn robustness_1_examples() {
        let cfg = small();
        assert_eq!(check_robustness_1(MetricId::Dcg, &cfg).unwrap().verdict, Verdict::Fail);
        assert_eq!(check_robustness_1(MetricId::Mse, &cfg).unwrap().verdict, Verdict::Fail);
        // one adjacent swap changes kendall_tau by exactly 2 / C(n, 2)
        let sigma = sample_one(30, 1, 0).unwrap();
        let nu = sample_one(30, 1, 1).unwrap();
        let ecfg = cfg.eval_config(30);
        let a = evaluate(MetricId::KendallTau, &sigma, &nu, &ecfg).unwrap().value().unwrap();
        let swapped = nu.swap_values(SwapSpec::new(7, 8).unwrap()).unwrap();
        let b = evaluate(MetricId::KendallTau, &sigma, &swapped, &ecfg).unwrap().value().unwrap();
        assert!(((a - b).abs() - 2.0 / 435.0).abs() < 1e-12);
    }

    #[test]
    fn robustness_2_examples() {
        let cfg = small();
        for m in [
            MetricId::Mse,
            MetricId::Rmse,
            MetricId::Mae,
            MetricId::Mape,
            MetricId::R2,
            MetricId::KendallTau,
            MetricId::SpearmanRho,
        ] {
            assert_eq!(check_robustness_2(m, &cfg).unwrap().verdict, Verdict::Pass, "{m}");
        }
        let r = check_robustness_2(MetricId::Precision, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        let ecfg = cfg.eval_config(30);
        let (mu, sigma, nu) = (&w.rankings[0], &w.rankings[1], &w.rankings[2]);
        let lhs = evaluate(MetricId::Precision, &mu.compose(nu).unwrap(), &sigma.compose(nu).unwrap(), &ecfg);
        assert_eq!(lhs.unwrap(), w.values[0]);
    }

    #[test]
    fn wsd_examples() {
        let cfg = small();
        for m in [MetricId::KendallTau, MetricId::SpearmanRho, MetricId::Ndpm] {
            assert_eq!(check_wsd(m, &cfg).unwrap().verdict, Verdict::Pass, "{m}");
        }
        let dcg = check_wsd(MetricId::Dcg, &cfg).unwrap();
        assert_eq!(dcg.verdict, Verdict::Fail);
        assert_eq!(dcg.witnesses[0].rankings, vec![sw(8, 1, 2), sw(8, 7, 8)]);
        assert_eq!(check_wsd(MetricId::Recall, &cfg).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn sensitivity_examples() {
        let mut cfg = small();
        cfg.exhaustive.sensitivity = 6;
        let v = |m| check_sensitivity(m, &cfg).unwrap();
        assert_eq!(v(MetricId::Dcg).verdict, Verdict::Pass);
        assert_eq!(v(MetricId::MeanRank).verdict, Verdict::Pass);
        assert_eq!(cfg.eval_config(6).relevance.relevant, 3);
        assert_eq!(v(MetricId::KendallTau).verdict, Verdict::Fail);
        assert_eq!(v(MetricId::Mape).verdict, Verdict::Pass);
    }

    #[test]
    fn wsd_pass_means_no_identity_sensitivity_witness() {
        let cfg = small();
        let n = cfg.exhaustive.wsd;
        let id = vec![Permutation::identity(n).unwrap()];
        for &m in MetricId::ALL {
            if check_wsd(m, &cfg).unwrap().verdict == Verdict::Pass {
                let w = find_sensitivity_witness(m, &id, &cfg.eval_config(n), cfg.tolerance).unwrap();
                assert!(w.is_none(), "{m}");
            }
        }
    }

    #[test]
    fn stability_examples() {
        let cfg = small();
        // identical rankings: recall@k = 1 for every k
        let sigma = sample_one(30, 4, 0).unwrap();
        let ecfg = cfg.eval_config(30);
        for k in 1..=30 {
            assert_eq!(
                evaluate_at_k(MetricId::Recall, &sigma, &sigma, k, &ecfg).unwrap(),
                MetricValue::Defined(1.0)
            );
        }
        assert_eq!(check_stability(MetricId::MeanRank, &cfg).unwrap().verdict, Verdict::Fail);
        let r = check_stability(MetricId::KendallTau, &cfg).unwrap();
        assert!(r.statistic.unwrap() > 0.5);
    }

    #[test]
    fn induced_distance_examples() {
        let ecfg = EvalConfig::default_for(2);
        let id = Permutation::identity(2).unwrap();
        let s = sw(2, 1, 2);
        let abs = induced_distance(MetricId::Dcg, true).unwrap();
        let signed = induced_distance(MetricId::Dcg, false).unwrap();
        assert_eq!(abs.eval(&s, &s, &ecfg).unwrap(), MetricValue::Defined(0.0));
        let d = abs.eval(&id, &s, &ecfg).unwrap().value().unwrap();
        assert!((d - 0.36907).abs() < 1e-5);
        let ab = signed.eval(&id, &s, &ecfg).unwrap().value().unwrap();
        let ba = signed.eval(&s, &id, &ecfg).unwrap().value().unwrap();
        assert_eq!(ab, -ba);
        assert!(induced_distance(MetricId::Mse, true).is_err());
    }

    #[test]
    fn distance_examples() {
        let cfg = small();
        let abs = induced_distance(MetricId::Dcg, true).unwrap();
        assert_eq!(check_distance_axioms(&abs, 4, &cfg).unwrap().verdict, Verdict::Pass);
        let signed = induced_distance(MetricId::Dcg, false).unwrap();
        let r = check_distance_axioms(&signed, 4, &cfg).unwrap();
        assert_eq!(r.check("symmetry"), Some(false));
        assert_eq!(r.check("positivity"), Some(false));
        let mse = check_distance_axioms(&MetricId::Mse, 4, &cfg).unwrap();
        assert_eq!(mse.check("triangle"), Some(false));
        let w = mse.witnesses.iter().find(|w| w.label == "triangle").unwrap();
        let ecfg = cfg.eval_config(4);
        let (x, y, z) = (&w.rankings[0], &w.rankings[1], &w.rankings[2]);
        let xz = evaluate(MetricId::Mse, x, z, &ecfg).unwrap().value().unwrap();
        let xy = evaluate(MetricId::Mse, x, y, &ecfg).unwrap().value().unwrap();
        let yz = evaluate(MetricId::Mse, y, z, &ecfg).unwrap().value().unwrap();
        assert!(xz > xy + yz);
        assert!(check_distance_axioms(&MetricId::Mse, 6, &cfg).is_err());
    }

    #[test]
    fn distance_identity_matches_dcg_injectivity() {
        let mut cfg = small();
        for n in 2..=5 {
            cfg.exhaustive.ioi = n;
            let ioi = check_ioi(MetricId::Dcg, &cfg).unwrap().verdict == Verdict::Pass;
            let abs = induced_distance(MetricId::Dcg, true).unwrap();
            let d = check_distance_axioms(&abs, n, &cfg).unwrap();
            assert_eq!(d.check("positivity"), Some(ioi), "n = {n}");
        }
    }

    #[test]
    fn agreement_bounds_examples() {
        let cfg = small();
        for m in [MetricId::KendallTau, MetricId::SpearmanRho] {
            let r = check_agreement_bounds(m, &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{m}: {}", r.detail);
            assert_eq!(r.statistic, Some(1.0));
        }
        let dcg = check_agreement_bounds(MetricId::Dcg, &cfg).unwrap();
        assert_eq!(dcg.verdict, Verdict::Fail);
        assert_eq!(dcg.check("length_independent"), Some(false));
    }

    #[test]
    fn table_shape_and_determinism() {
        let cfg = small();
        let metrics = [MetricId::Dcg, MetricId::Ndcg, MetricId::KendallTau];
        let props = [PropertyId::Ioi, PropertyId::Wsd];
        let grid = property_table(&metrics, &props, &cfg);
        assert_eq!(grid.len(), 2);
        assert!(grid.iter().all(|row| row.len() == 3));
        assert_eq!(grid[0][0].verdict, Verdict::Pass);
        assert_eq!(grid[0][1].verdict, Verdict::Pass);
        assert_eq!(grid, property_table(&metrics, &props, &cfg));
        let empty = property_table(&[], &props, &cfg);
        assert!(empty.iter().all(|row| row.is_empty()));
        let mut bad = cfg.clone();
        bad.exhaustive.ioi = 1;
        let g = property_table(&metrics[..1], &props[..1], &bad);
        assert_eq!(g[0][0].verdict, Verdict::Undefined);
    }

    #[test]
    fn ambiguity_flags() {
        assert!(ambiguity(MetricId::Ndpm, PropertyId::Sensitivity).is_some());
        assert!(ambiguity(MetricId::Ndpm, PropertyId::Robustness2).is_some());
        assert!(ambiguity(MetricId::Mse, PropertyId::Stability).is_some());
        assert!(ambiguity(MetricId::KendallTau, PropertyId::Stability).is_none());
    }
}
