use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One line of a report: either a numeric defect compared against a
/// tolerance, or a predicate with the observed value attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `defect ≤ tol`; NaN never passes.
    pub fn defect(name: impl Into<String>, defect: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            defect: Some(defect),
            tol: Some(tol),
            observed: None,
            pass: defect <= tol,
            provenance: None,
            note: None,
        }
    }

    pub fn predicate(name: impl Into<String>, pass: bool, observed: Value) -> Self {
        Check { name: name.into(), defect: None, tol: None, observed: Some(observed), pass, provenance: None, note: None }
    }

    /// A violated hypothesis: the check did not run, and that is a failure.
    pub fn hypothesis(name: impl Into<String>, message: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            defect: None,
            tol: None,
            observed: None,
            pass: false,
            provenance: None,
            note: Some(message.into()),
        }
    }

    pub fn from(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn observe(mut self, observed: Value) -> Self {
        self.observed = Some(observed);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Vec<String>,
    pub tol: f64,
    pub seed: u64,
    pub status: Status,
    pub max_defect: Option<f64>,
    pub elapsed_ms: f64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<String>, tol: f64, seed: u64, checks: Vec<Check>, elapsed_ms: f64) -> Self {
        let status = if !checks.is_empty() && checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        let max_defect = checks.iter().filter_map(|c| c.defect).reduce(f64::max);
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            tol,
            seed,
            status,
            max_defect,
            elapsed_ms,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Three significant digits.
pub fn sig3(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_finite() {
        format!("{x:.2e}")
    } else {
        format!("{x}")
    }
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => text(report),
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    if report.inputs.is_empty() {
        let _ = writeln!(out, "{}: {verdict}", report.command);
    } else {
        let _ = writeln!(out, "{} [{}]: {verdict}", report.command, report.inputs.join(", "));
    }
    let width = report.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    for c in &report.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        let mut line = format!("  {mark} {:<width$}", c.name);
        if let (Some(d), Some(t)) = (c.defect, c.tol) {
            let _ = write!(line, "  defect {} (tol {})", sig3(d), sig3(t));
        }
        if let Some(v) = &c.observed {
            let _ = write!(line, "  observed {}", observed_text(v));
        }
        if let Some(p) = &c.provenance {
            let _ = write!(line, "  [{p}]");
        }
        if let Some(n) = &c.note {
            let _ = write!(line, "  -- {n}");
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = write!(out, "{passed}/{} checks passed", report.checks.len());
    if let Some(m) = report.max_defect {
        let _ = write!(out, ", max defect {}", sig3(m));
    }
    let _ = writeln!(out, " ({:.1} ms)", report.elapsed_ms);
    out
}

fn observed_text(v: &Value) -> String {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => sig3(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}
