//! Report rows, summaries and their text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "n,t,err_resolvent,err_product";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: u64,
    pub t: f64,
    pub err_resolvent: f64,
    pub err_product: f64,
}

/// A scalar compared against a threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the value must not exceed the threshold, `false` when it must exceed it.
    pub at_most: bool,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            at_most: true,
            pass: value <= threshold,
        }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            at_most: false,
            pass: value > threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    /// Log-log slopes keyed by track and `t`; absent when undefined.
    pub fitted_rates: BTreeMap<String, Option<f64>>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Summary {
    pub fn new(fitted_rates: BTreeMap<String, Option<f64>>, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Summary {
            fitted_rates,
            checks,
            pass,
        }
    }
}

/// Everything a scenario run produces; serialized as the raw JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawReport {
    pub scenario: String,
    pub seed: u64,
    pub dimension: usize,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format `{other}` (expected csv or markdown)")),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            fmt_float(r.t),
            fmt_float(r.err_resolvent),
            fmt_float(r.err_product)
        );
    }
    out
}

pub fn markdown(report: &RawReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} (d = {}, seed = {})\n",
        report.scenario, report.dimension, report.seed
    );
    out.push_str("| n | t | err_resolvent | err_product |\n|---:|---:|---:|---:|\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.n,
            fmt_float(r.t),
            fmt_float(r.err_resolvent),
            fmt_float(r.err_product)
        );
    }
    if !report.summary.fitted_rates.is_empty() {
        out.push_str("\n| track | fitted rate |\n|---|---:|\n");
        for (k, v) in &report.summary.fitted_rates {
            let shown = v.map(fmt_float).unwrap_or_else(|| "n/a".into());
            let _ = writeln!(out, "| {} | {shown} |", k.replace('|', "\\|"));
        }
    }
    if !report.summary.checks.is_empty() {
        out.push_str("\n| check | value | threshold | result |\n|---|---:|---:|---|\n");
        for c in &report.summary.checks {
            let rel = if c.at_most { "≤" } else { ">" };
            let _ = writeln!(
                out,
                "| {} | {} | {} {} | {} |",
                c.name.replace('|', "\\|"),
                fmt_float(c.value),
                rel,
                fmt_float(c.threshold),
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    let _ = writeln!(out, "\noverall: {}", if report.summary.pass { "pass" } else { "FAIL" });
    out
}

pub fn emit_report(report: &RawReport, format: Format) -> String {
    match format {
        Format::Csv => csv(&report.rows),
        Format::Markdown => markdown(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(rows: Vec<Row>) -> RawReport {
        RawReport {
            scenario: "test".into(),
            seed: 1,
            dimension: 2,
            rows,
            summary: Summary::default(),
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(emit_report(&report(vec![]), Format::Csv), "n,t,err_resolvent,err_product\n");
    }

    #[test]
    fn one_row_gives_two_lines() {
        let row = Row {
            n: 4,
            t: 1.0,
            err_resolvent: 0.1,
            err_product: 0.0,
        };
        let text = emit_report(&report(vec![row]), Format::Csv);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "4,1.0000000000000000e0,1.0000000000000001e-1,0.0000000000000000e0"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn floats_round_trip() {
        for x in [std::f64::consts::PI, 1e-300, 0.1 + 0.2, 6.02e23] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn markdown_lists_rows() {
        let row = Row {
            n: 1,
            t: 0.5,
            err_resolvent: 1.0,
            err_product: 2.0,
        };
        let md = emit_report(&report(vec![row]), Format::Markdown);
        assert!(md.contains("| 1 | 5.0000000000000000e-1 |"));
    }
}
