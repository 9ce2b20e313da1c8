//! Text serializations: agreement matrix CSV, its metadata sidecar, the
//! verdict grid CSV, the full property report and `key = value` files.

use std::fmt::Write as _;

use crate::agreement::{AgreementConfig, AgreementMatrix};
use crate::error::{Error, Result};
use crate::properties::PropertyReport;

/// First row and column hold metric names; cells are ratios with six decimals
/// or `undef`.
pub fn matrix_csv(m: &AgreementMatrix) -> String {
    let mut out = String::from("metric");
    for id in m.metrics() {
        write!(out, ",{id}").unwrap();
    }
    out.push('\n');
    for (a, id) in m.metrics().iter().enumerate() {
        out.push_str(id.name());
        for b in 0..m.len() {
            match m.ratio(a, b) {
                Some(r) => write!(out, ",{r:.6}").unwrap(),
                None => out.push_str(",undef"),
            }
        }
        out.push('\n');
    }
    out
}

/// Campaign settings plus one `skipped.<a>.<b>` line per unordered metric pair.
pub fn matrix_metadata(m: &AgreementMatrix, cfg: &AgreementConfig) -> String {
    let mut out = String::new();
    let r = cfg.eval.relevance;
    writeln!(out, "n = {}", cfg.n).unwrap();
    writeln!(out, "seed = {}", cfg.seed).unwrap();
    writeln!(out, "sample_rankings = {}", cfg.sample_rankings).unwrap();
    writeln!(out, "sample_pairs = {}", cfg.sample_pairs).unwrap();
    writeln!(out, "relevant_j = {}", r.relevant).unwrap();
    writeln!(out, "retrieved_k = {}", r.retrieved).unwrap();
    writeln!(out, "reference = {}", cfg.reference).unwrap();
    let names: Vec<&str> = m.metrics().iter().map(|id| id.name()).collect();
    writeln!(out, "metrics = {}", names.join(",")).unwrap();
    for a in 0..m.len() {
        for b in a..m.len() {
            let rep = m.report(a, b);
            writeln!(out, "skipped.{}.{} = {}", rep.metric_a, rep.metric_b, rep.pairs_skipped_undefined).unwrap();
        }
    }
    out
}

/// Rows are properties, columns are metrics, cells are `pass`, `fail` or `undef`.
pub fn verdict_csv(grid: &[Vec<PropertyReport>]) -> String {
    let mut out = String::from("property");
    if let Some(row) = grid.first() {
        for r in row {
            write!(out, ",{}", r.metric).unwrap();
        }
    }
    out.push('\n');
    for row in grid {
        let Some(first) = row.first() else { continue };
        out.push_str(first.property.name());
        for r in row {
            write!(out, ",{}", r.verdict).unwrap();
        }
        out.push('\n');
    }
    out
}

/// One record per cell:
///
/// ```text
/// [kendall_tau robustness_1]
/// verdict = pass
/// n = 100
/// statistic = 0
/// check.identity = pass
/// witness = <label>: 2,1,3 | 1,2,3 -> 0.5, 1
/// ambiguity = ...
/// detail = ...
/// config_hash = 3f2a...
/// ```
///
/// `statistic`, `check.*`, `witness` and `ambiguity` lines appear only when set.
pub fn report_text(grid: &[Vec<PropertyReport>]) -> String {
    let mut out = String::new();
    for r in grid.iter().flatten() {
        writeln!(out, "[{} {}]", r.metric, r.property).unwrap();
        writeln!(out, "verdict = {}", r.verdict).unwrap();
        writeln!(out, "n = {}", r.n).unwrap();
        if let Some(s) = r.statistic {
            writeln!(out, "statistic = {s}").unwrap();
        }
        for (name, ok) in &r.checks {
            writeln!(out, "check.{name} = {}", if *ok { "pass" } else { "fail" }).unwrap();
        }
        for w in &r.witnesses {
            writeln!(out, "witness = {w}").unwrap();
        }
        if let Some(a) = r.ambiguity {
            writeln!(out, "ambiguity = {a}").unwrap();
        }
        writeln!(out, "detail = {}", r.detail).unwrap();
        writeln!(out, "config_hash = {}", r.config_hash).unwrap();
        out.push('\n');
    }
    out
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// ignored; later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            input: line.to_string(),
            reason: format!("line {} is not 'key = value'", number + 1),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => out.push((key, value)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agreement::agreement_matrix;
    use crate::metrics::MetricId;
    use crate::properties::{property_table, PropertyId, ProtocolConfig};

    #[test]
    fn matrix_round_trip_shape() {
        let cfg = AgreementConfig {
            sample_rankings: 50,
            sample_pairs: 200,
            ..AgreementConfig::new(10).unwrap()
        };
        let m = agreement_matrix(&[MetricId::Mse, MetricId::Rmse], &cfg).unwrap();
        let csv = matrix_csv(&m);
        assert_eq!(csv, "metric,mse,rmse\nmse,1.000000,1.000000\nrmse,1.000000,1.000000\n");
        let meta = matrix_metadata(&m, &cfg);
        let kv = parse_key_values(&meta).unwrap();
        assert!(kv.contains(&("n".into(), "10".into())));
        assert!(kv.contains(&("relevant_j".into(), "5".into())));
        assert!(kv.contains(&("skipped.mse.rmse".into(), "0".into())));
    }

    #[test]
    fn verdict_grid_layout() {
        let cfg = ProtocolConfig::default();
        let grid = property_table(&[MetricId::Dcg, MetricId::Mse], &[PropertyId::Symmetry], &cfg);
        assert_eq!(verdict_csv(&grid), "property,dcg,mse\nsymmetry,fail,pass\n");
        let text = report_text(&grid);
        assert!(text.starts_with("[dcg symmetry]\nverdict = fail\n"));
        assert_eq!(text.matches("config_hash = ").count(), 2);
    }

    #[test]
    fn key_values() {
        let kv = parse_key_values("# c\n\nn = 5\nseed=7\nn = 6\n").unwrap();
        assert_eq!(kv, vec![("n".into(), "6".into()), ("seed".into(), "7".into())]);
        assert!(parse_key_values("oops").is_err());
    }
}
