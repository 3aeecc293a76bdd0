//! Check reports and CSV export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::phifun::{Band, EvaluationGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// A construction that must not exist was refused, with a diagnostic.
    CorrectlyRejected,
    Fail,
}

impl Verdict {
    pub fn ok(self) -> bool {
        self != Verdict::Fail
    }

    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::CorrectlyRejected => "correctly_rejected",
            Verdict::Fail => "fail",
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    /// The identity or inequality being tested.
    pub formula: String,
    pub grid: Option<EvaluationGrid>,
    pub band: Option<Band>,
    pub verdict: Verdict,
    pub details: Value,
}

/// One row per report: check, verdict, band.
pub fn summary_csv(reports: &[Report]) -> String {
    let mut out = String::from("check,verdict,band_min,band_max\n");
    for r in reports {
        let (lo, hi) = r.band.map(|b| (num(b.min), num(b.max))).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", r.check, r.verdict.as_str(), lo, hi);
    }
    out
}

/// Full-precision float for CSV.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Columns sharing the abscissa `t`.
pub fn table_csv(t: &[f64], columns: &[(&str, &[f64])]) -> String {
    let mut out = String::from("t");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, &x) in t.iter().enumerate() {
        out.push_str(&num(x));
        for (_, col) in columns {
            out.push(',');
            out.push_str(&num(col[i]));
        }
        out.push('\n');
    }
    out
}
