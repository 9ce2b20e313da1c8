//! Brute-force verification of closed-form results on small groups.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::{dcg, kendall_tau, MetricId};
use crate::perm::{enumerate_with_limit, swap, Permutation, SwapSpec};
use crate::properties::{check_distance_axioms, check_wsd, induced_distance, ProtocolConfig, Verdict};

/// Largest `n` accepted by the Kendall swap oracle.
pub const KENDALL_SWAP_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSubject {
    DcgIoi,
    KendallSwap,
    DistanceAxioms,
    Wsd,
}

impl OracleSubject {
    pub const ALL: &'static [OracleSubject] = &[
        OracleSubject::DcgIoi,
        OracleSubject::KendallSwap,
        OracleSubject::DistanceAxioms,
        OracleSubject::Wsd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleSubject::DcgIoi => "dcg-ioi",
            OracleSubject::KendallSwap => "kendall-swap",
            OracleSubject::DistanceAxioms => "distance-axioms",
            OracleSubject::Wsd => "wsd",
        }
    }
}

impl fmt::Display for OracleSubject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OracleSubject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected dcg-ioi, kendall-swap, distance-axioms or wsd".into(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub subject: OracleSubject,
    pub n: usize,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oracle {} n={}: {}", self.subject, self.n, if self.passed { "pass" } else { "fail" })?;
        for line in &self.lines {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

pub fn run(subject: OracleSubject, n: usize, cfg: &ProtocolConfig) -> Result<OracleReport> {
    match subject {
        OracleSubject::DcgIoi => dcg_ioi(n, cfg.exhaustive_limit),
        OracleSubject::KendallSwap => kendall_swap(n),
        OracleSubject::DistanceAxioms => distance_axioms(n, cfg),
        OracleSubject::Wsd => wsd(n, cfg),
    }
}

/// Every DCG value on `S_n` is distinct and the identity is the strict minimum.
pub fn dcg_ioi(n: usize, limit: usize) -> Result<OracleReport> {
    let perms = enumerate_with_limit(n, limit)?;
    let mut values: Vec<(f64, &Permutation)> = perms.iter().map(|p| (dcg(p), p)).collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let collisions: Vec<_> = values
        .windows(2)
        .filter(|w| w[1].0 - w[0].0 <= 1e-9 * w[1].0.abs().max(1.0))
        .collect();
    let id_minimal = values[0].1.is_identity() && (values.len() == 1 || values[1].0 > values[0].0);
    let mut lines = vec![
        format!("{} rankings, {} distinct values", perms.len(), perms.len() - collisions.len()),
        format!("identity is the strict minimum: {}", if id_minimal { "yes" } else { "no" }),
    ];
    for w in collisions.iter().take(3) {
        lines.push(format!("equal: dcg({}) = dcg({}) = {}", w[0].1, w[1].1, w[0].0));
    }
    Ok(OracleReport {
        subject: OracleSubject::DcgIoi,
        n,
        passed: collisions.is_empty() && id_minimal,
        lines,
    })
}

/// Discordant pairs by direct enumeration of all `i < j`.
pub fn brute_force_discordant(a: &[u32], b: &[u32]) -> u64 {
    let mut count = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] < a[j]) != (b[i] < b[j]) {
                count += 1;
            }
        }
    }
    count
}

/// For every swap `(i j)` of `S_n`, the brute-force discordant count is
/// `2|i − j| − 1` and `kendall_tau(id, (i j)) = (C(n,2) − 4|i − j| + 2) / C(n,2)`.
pub fn kendall_swap(n: usize) -> Result<OracleReport> {
    if n > KENDALL_SWAP_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: KENDALL_SWAP_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::TooShort { metric: "kendall_tau", n });
    }
    let id = Permutation::identity(n)?;
    let pairs = (n * (n - 1) / 2) as f64;
    let mut lines = Vec::new();
    let mut checked = 0usize;
    for i in 1..=n {
        for j in i + 1..=n {
            let s = swap(n, SwapSpec::new(i, j)?)?;
            let d = (j - i) as u64;
            let brute = brute_force_discordant(id.as_slice(), s.as_slice());
            let closed = (pairs - 4.0 * d as f64 + 2.0) / pairs;
            let brute_tau = (pairs - 2.0 * brute as f64) / pairs;
            let fast = kendall_tau(&id, &s)?;
            checked += 1;
            if brute != 2 * d - 1 || (brute_tau - closed).abs() > 1e-12 || (fast - closed).abs() > 1e-12 {
                lines.push(format!(
                    "mismatch at ({i} {j}): discordant {brute}, expected {}; tau {fast} vs {closed}",
                    2 * d - 1
                ));
            }
        }
    }
    let passed = lines.is_empty();
    lines.insert(0, format!("{checked} swaps checked"));
    Ok(OracleReport {
        subject: OracleSubject::KendallSwap,
        n,
        passed,
        lines,
    })
}

/// `|dcg(a) − dcg(b)|` and its nDCG analogue satisfy every distance axiom,
/// while the signed difference is not symmetric.
pub fn distance_axioms(n: usize, cfg: &ProtocolConfig) -> Result<OracleReport> {
    let mut lines = Vec::new();
    let mut passed = true;
    for (metric, absolute, expect_pass) in [
        (MetricId::Dcg, true, true),
        (MetricId::Ndcg, true, true),
        (MetricId::Dcg, false, false),
    ] {
        let f = induced_distance(metric, absolute)?;
        let r = check_distance_axioms(&f, n, cfg)?;
        let ok = if expect_pass {
            r.verdict == Verdict::Pass
        } else {
            r.check("symmetry") == Some(false)
        };
        passed &= ok;
        let failed: Vec<&str> = r.checks.iter().filter(|(_, ok)| !ok).map(|(k, _)| *k).collect();
        let name = if absolute { format!("|{metric}(a) - {metric}(b)|") } else { format!("{metric}(a) - {metric}(b)") };
        lines.push(if failed.is_empty() {
            format!("{name}: pass")
        } else {
            format!("{name}: fail({})", failed.join(","))
        });
        for w in &r.witnesses {
            lines.push(format!("  {w}"));
        }
    }
    Ok(OracleReport {
        subject: OracleSubject::DistanceAxioms,
        n,
        passed,
        lines,
    })
}

/// Kendall's τ, Spearman's ρ and NDPM give equal-width swaps from the identity
/// identical values.
pub fn wsd(n: usize, cfg: &ProtocolConfig) -> Result<OracleReport> {
    let mut local = cfg.clone();
    local.exhaustive.wsd = n;
    let mut lines = Vec::new();
    let mut passed = true;
    for metric in [MetricId::KendallTau, MetricId::SpearmanRho, MetricId::Ndpm] {
        let r = check_wsd(metric, &local)?;
        passed &= r.verdict == Verdict::Pass;
        lines.push(format!("{metric}: {}", r.verdict));
        for w in &r.witnesses {
            lines.push(format!("  {w}"));
        }
    }
    Ok(OracleReport {
        subject: OracleSubject::Wsd,
        n,
        passed,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subjects_parse() {
        for &s in OracleSubject::ALL {
            assert_eq!(s.name().parse::<OracleSubject>().unwrap(), s);
        }
        assert!("dcg".parse::<OracleSubject>().is_err());
    }

    #[test]
    fn dcg_ioi_small() {
        for n in 2..=6 {
            assert!(dcg_ioi(n, 8).unwrap().passed, "n = {n}");
        }
        let seven = dcg_ioi(7, 8).unwrap();
        assert!(!seven.passed);
        assert!(seven.lines[1].ends_with("yes"));
        assert!(dcg_ioi(9, 8).is_err());
    }

    #[test]
    fn kendall_swap_closed_form() {
        for n in 2..=10 {
            assert!(kendall_swap(n).unwrap().passed);
        }
        assert!(kendall_swap(KENDALL_SWAP_LIMIT + 1).is_err());
    }

    #[test]
    fn distance_and_wsd() {
        let cfg = ProtocolConfig::default();
        let d = distance_axioms(4, &cfg).unwrap();
        assert!(d.passed, "{d}");
        assert!(d.lines.iter().any(|l| l.starts_with("dcg(a) - dcg(b): fail(") && l.contains("symmetry")));
        assert!(wsd(8, &cfg).unwrap().passed);
    }
}
