use thiserror::Error;

/// Errors raised by the library. Undefined metric values are not errors; see
/// [`crate::metrics::MetricValue`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ranking length must be at least 1")]
    EmptyRanking,
    #[error("not a permutation of 1..={n}: {reason}")]
    NotBijection { n: usize, reason: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("position {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("a swap needs two distinct positions, got ({0} {0})")]
    DegenerateSwap(usize),
    #[error("prefix length {k} out of range 1..={n}")]
    PrefixOutOfRange { k: usize, n: usize },
    #[error("exhaustive enumeration of S_{n} exceeds the configured limit n <= {limit}")]
    ExhaustiveLimit { n: usize, limit: usize },
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("{metric} needs at least two items, got {n}")]
    TooShort { metric: &'static str, n: usize },
    #[error("invalid relevance sizes: relevant={relevant}, retrieved={retrieved}, n={n}")]
    InvalidRelevance {
        relevant: usize,
        retrieved: usize,
        n: usize,
    },
    #[error("{metric} is not a {expected} metric")]
    WrongFamily {
        metric: &'static str,
        expected: &'static str,
    },
    #[error("{metric}: {reason}")]
    Unsupported {
        metric: &'static str,
        reason: &'static str,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
