//! Resolved settings of the file-producing commands.
//!
//! Each value is taken from, in order of preference: a command-line flag, the
//! `--config` file, the environment (`RANKEVAL_SEED`, `RANKEVAL_WORKERS`) and
//! the built-in defaults.

use std::path::Path;

use rankeval::agreement::AgreementConfig;
use rankeval::metrics::ErrorScale;
use rankeval::rng::DEFAULT_SEED;
use rankeval::{EvalConfig, MetricId, PropertyId, ProtocolConfig, RelevanceConfig};

use crate::error::{CliError, CliResult};
use crate::manifest::read_config;

pub const SEED_VAR: &str = "RANKEVAL_SEED";
pub const WORKERS_VAR: &str = "RANKEVAL_WORKERS";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Env {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

impl Env {
    pub fn from_process() -> CliResult<Self> {
        Ok(Self {
            seed: read_var(SEED_VAR)?,
            workers: read_var(WORKERS_VAR)?,
        })
    }
}

fn read_var<T: std::str::FromStr>(name: &str) -> CliResult<Option<T>> {
    match std::env::var(name) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{name}={v:?} is not a non-negative integer"))),
        _ => Ok(None),
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{key} expects a non-negative integer, got {value:?}")))
}

/// `all` (every registered metric), `catalog` (the 33 catalog metrics) or a
/// comma-separated list of names.
pub fn parse_metrics(list: &str) -> CliResult<Vec<MetricId>> {
    let metrics: Vec<MetricId> = match list.trim() {
        "all" => MetricId::ALL.to_vec(),
        "catalog" => MetricId::catalog_metrics(),
        s => s.split(',').map(|m| m.trim().parse()).collect::<Result<_, _>>()?,
    };
    if metrics.is_empty() {
        return Err(CliError::Usage("empty metric list".into()));
    }
    Ok(metrics)
}

/// `all` or a comma-separated list of property names.
pub fn parse_properties(list: &str) -> CliResult<Vec<PropertyId>> {
    match list.trim() {
        "all" => Ok(PropertyId::ALL.to_vec()),
        s => Ok(s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn kv(k: &str, v: impl std::fmt::Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementSettings {
    pub n: usize,
    pub samples: usize,
    pub pairs: usize,
    pub seed: u64,
    pub relevant: Option<usize>,
    pub retrieved: Option<usize>,
    pub metrics: Vec<MetricId>,
    pub error_scale: ErrorScale,
    pub f_beta: f64,
    pub workers: Option<usize>,
}

impl AgreementSettings {
    pub fn builtin(env: Env) -> Self {
        Self {
            n: 100,
            samples: 10_000,
            pairs: 100_000,
            seed: env.seed.unwrap_or(DEFAULT_SEED),
            relevant: None,
            retrieved: None,
            metrics: MetricId::catalog_metrics(),
            error_scale: ErrorScale::Sum,
            f_beta: 1.0,
            workers: env.workers,
        }
    }

    pub fn load(&mut self, path: &Path) -> CliResult<()> {
        for (k, v) in read_config(path, "agreement")? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "n" => self.n = number(key, value)?,
            "samples" => self.samples = number(key, value)?,
            "pairs" => self.pairs = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "relevant" => self.relevant = Some(number(key, value)?),
            "retrieved" => self.retrieved = Some(number(key, value)?),
            "metrics" => self.metrics = parse_metrics(value)?,
            "error_scale" => self.error_scale = parse_scale(value)?,
            "f_beta" => {
                self.f_beta = value
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("f_beta expects a number, got {value:?}")))?
            }
            "workers" => self.workers = Some(number(key, value)?),
            _ => return Err(CliError::Usage(format!("unknown agreement key {key:?}"))),
        }
        Ok(())
    }

    pub fn relevance(&self) -> RelevanceConfig {
        let default = RelevanceConfig::default_for(self.n);
        let relevant = self.relevant.unwrap_or(default.relevant);
        RelevanceConfig::new(relevant, self.retrieved.unwrap_or(relevant))
    }

    pub fn to_config(&self) -> CliResult<AgreementConfig> {
        let cfg = AgreementConfig {
            sample_rankings: self.samples,
            sample_pairs: self.pairs,
            seed: self.seed,
            eval: EvalConfig {
                relevance: self.relevance(),
                error_scale: self.error_scale,
                f_beta: self.f_beta,
            },
            ..AgreementConfig::new(self.n)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every setting except `workers`, with defaults materialized.
    pub fn canonical(&self) -> Vec<(String, String)> {
        let r = self.relevance();
        vec![
            kv("n", self.n),
            kv("samples", self.samples),
            kv("pairs", self.pairs),
            kv("seed", self.seed),
            kv("relevant", r.relevant),
            kv("retrieved", r.retrieved),
            kv("metrics", join(&self.metrics)),
            kv("error_scale", scale_name(self.error_scale)),
            kv("f_beta", self.f_beta),
        ]
    }
}

fn parse_scale(value: &str) -> CliResult<ErrorScale> {
    match value.trim() {
        "sum" => Ok(ErrorScale::Sum),
        "mean" => Ok(ErrorScale::Mean),
        v => Err(CliError::Usage(format!("error_scale expects 'sum' or 'mean', got {v:?}"))),
    }
}

fn scale_name(scale: ErrorScale) -> &'static str {
    match scale {
        ErrorScale::Sum => "sum",
        ErrorScale::Mean => "mean",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertySettings {
    pub protocol: ProtocolConfig,
    pub metrics: Vec<MetricId>,
    pub properties: Vec<PropertyId>,
    pub workers: Option<usize>,
}

impl PropertySettings {
    pub fn builtin(env: Env) -> Self {
        let mut protocol = ProtocolConfig::default();
        if let Some(seed) = env.seed {
            protocol.seed = seed;
        }
        Self {
            protocol,
            metrics: MetricId::catalog_metrics(),
            properties: PropertyId::ALL.to_vec(),
            workers: env.workers,
        }
    }

    pub fn load(&mut self, path: &Path) -> CliResult<()> {
        for (k, v) in read_config(path, "properties")? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "metrics" => self.metrics = parse_metrics(value)?,
            "properties" => self.properties = parse_properties(value)?,
            "workers" => self.workers = Some(number(key, value)?),
            _ => self.protocol.set(key, value)?,
        }
        Ok(())
    }

    pub fn canonical(&self) -> Vec<(String, String)> {
        let mut out = vec![kv("metrics", join(&self.metrics)), kv("properties", join(&self.properties))];
        out.extend(
            self.protocol
                .canonical()
                .lines()
                .filter_map(|l| l.split_once(" = "))
                .map(|(k, v)| kv(k, v)),
        );
        out
    }
}
