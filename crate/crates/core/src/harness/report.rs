//! Machine-readable reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::harness::scenario::Scenario;
use crate::ARTIFACT_VERSION;

/// Bumped whenever the report layout changes.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub measured: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        CheckRecord {
            name: name.into(),
            status,
            measured: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            diagnostics: None,
        }
    }

    pub fn judged(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    /// A runtime math error, recorded as a failure.
    pub fn error(name: impl Into<String>, err: &Error) -> Self {
        Self::new(name, Status::Fail).diagnose(err.to_string())
    }

    pub fn measure(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.measured.insert(key.to_string(), v);
        self
    }

    pub fn tol(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn diagnose(mut self, text: impl Into<String>) -> Self {
        self.diagnostics = Some(text.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub artifact_version: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: Scenario, checks: Vec<CheckRecord>) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        Report {
            schema: REPORT_SCHEMA,
            artifact_version: ARTIFACT_VERSION.to_string(),
            scenario,
            checks,
            summary,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }
}

/// One row of the per-point CSV dump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub point: Vec<f64>,
    pub residual: f64,
    /// `S₁ … Sₙ` of the Hessian.
    pub s: Vec<f64>,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GridDump {
    pub n: usize,
    pub rows: Vec<GridRow>,
}

impl GridDump {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        header.push("residual".into());
        header.extend((1..=self.n).map(|i| format!("S{i}")));
        header.push("min_eig".into());
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row
                .point
                .iter()
                .chain(std::iter::once(&row.residual))
                .chain(&row.s)
                .chain(std::iter::once(&row.min_eigenvalue))
            {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{v:e}");
            }
            out.push('\n');
        }
        out
    }
}
