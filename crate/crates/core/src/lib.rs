//! Ranking evaluation metrics as functions on the symmetric group `S_n`,
//! with Monte Carlo agreement estimation and mechanical property checks.

pub mod agreement;
pub mod error;
pub mod formats;
pub mod metrics;
pub mod oracle;
pub mod perm;
pub mod properties;
pub mod rng;

pub use error::{Error, Result};
pub use metrics::{evaluate, evaluate_at_k, EvalConfig, MetricId, MetricValue, RelevanceConfig};
pub use perm::{Permutation, SwapSpec};
pub use properties::{PropertyId, ProtocolConfig, Verdict};
