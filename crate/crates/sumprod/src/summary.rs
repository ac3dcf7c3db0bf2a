//! Grouped summaries of report streams: a fixed-header CSV and a plain-text
//! rendering with one section per check.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use sumprod_core::harness::CheckId;

use crate::json::ReportRow;

/// Column order of the CSV summary. Bump the schema version if this changes.
pub const CSV_HEADER: [&str; 10] = [
    "check_id",
    "group",
    "count",
    "pass",
    "fail",
    "report_only",
    "hypothesis_skipped",
    "errors",
    "min_implied_constant",
    "max_implied_constant",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupRow {
    pub check_id: String,
    pub group: String,
    pub count: usize,
    pub pass: usize,
    pub fail: usize,
    pub report_only: usize,
    pub skipped: usize,
    pub errors: usize,
    pub min_constant: Option<f64>,
    pub max_constant: Option<f64>,
}

fn check_rank(name: &str) -> usize {
    CheckId::parse(name).ok().and_then(|c| CheckId::ALL.iter().position(|&x| x == c)).unwrap_or(usize::MAX)
}

/// Subgroup-indexed reports are grouped by subgroup order, everything else
/// forms a single group.
fn group_of(row: &ReportRow) -> (i64, String) {
    match row.param_int("order") {
        Some(d) => (d, format!("order={d}")),
        None => (-1, "all".to_string()),
    }
}

pub fn group_rows(rows: &[ReportRow]) -> Vec<GroupRow> {
    let mut groups: BTreeMap<(usize, String, i64, String), GroupRow> = BTreeMap::new();
    for row in rows {
        let (rank, label) = group_of(row);
        let key = (check_rank(&row.check_id), row.check_id.clone(), rank, label.clone());
        let g = groups.entry(key).or_insert_with(|| GroupRow {
            check_id: row.check_id.clone(),
            group: label,
            ..GroupRow::default()
        });
        g.count += 1;
        match row.verdict.as_str() {
            "pass" => g.pass += 1,
            "fail" => g.fail += 1,
            "report-only" => g.report_only += 1,
            "hypothesis-skipped" => g.skipped += 1,
            _ => g.errors += 1,
        }
        if let Some(c) = row.implied_constant {
            g.min_constant = Some(g.min_constant.map_or(c, |m| m.min(c)));
            g.max_constant = Some(g.max_constant.map_or(c, |m| m.max(c)));
        }
    }
    groups.into_values().collect()
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v}"))
}

pub fn write_csv<W: Write>(groups: &[GroupRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for g in groups {
        w.write_record([
            g.check_id.clone(),
            g.group.clone(),
            g.count.to_string(),
            g.pass.to_string(),
            g.fail.to_string(),
            g.report_only.to_string(),
            g.skipped.to_string(),
            g.errors.to_string(),
            opt(g.min_constant),
            opt(g.max_constant),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_sections(groups: &[GroupRow]) -> String {
    let mut out = String::new();
    let mut current: Option<&str> = None;
    for g in groups {
        if current != Some(g.check_id.as_str()) {
            if current.is_some() {
                out.push('\n');
            }
            let _ = writeln!(out, "## {}", g.check_id);
            let _ = writeln!(
                out,
                "{:<12} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>12} {:>12}",
                "group", "count", "pass", "fail", "report", "skip", "error", "min C", "max C"
            );
            current = Some(&g.check_id);
        }
        let c = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>12} {:>12}",
            g.group,
            g.count,
            g.pass,
            g.fail,
            g.report_only,
            g.skipped,
            g.errors,
            c(g.min_constant),
            c(g.max_constant)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::{json, Map};

    fn row(check: &str, verdict: &str, order: Option<i64>, c: Option<f64>) -> ReportRow {
        let mut params = Map::new();
        if let Some(d) = order {
            params.insert("order".into(), json!(d));
        }
        ReportRow { check_id: check.into(), verdict: verdict.into(), implied_constant: c, params, details: Map::new() }
    }

    #[test]
    fn groups_by_check_then_order() {
        let rows = [
            row("TWO_THIRDS", "report-only", Some(10), Some(0.5)),
            row("EP_INEQ", "pass", None, None),
            row("TWO_THIRDS", "report-only", Some(2), Some(0.7)),
            row("TWO_THIRDS", "report-only", Some(10), Some(0.9)),
        ];
        let g = group_rows(&rows);
        let labels: Vec<_> = g.iter().map(|g| (g.check_id.as_str(), g.group.as_str())).collect();
        assert_eq!(labels, [("EP_INEQ", "all"), ("TWO_THIRDS", "order=2"), ("TWO_THIRDS", "order=10")]);
        assert_eq!((g[2].count, g[2].min_constant, g[2].max_constant), (2, Some(0.5), Some(0.9)));

        let mut csv = Vec::new();
        write_csv(&g, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert_eq!(text.lines().count(), 4);
        assert_eq!(render_sections(&g).matches("## ").count(), 2);
    }
}
