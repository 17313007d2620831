//! Tabular experiment reports with CSV and JSON persistence.
//!
//! A report is a list of named rows, each carrying a value, an optional
//! bound or textual reference, a provenance tag, and an optional pass flag.
//! The CSV body is deterministic for a given (config, seed); the timestamp
//! lives on a leading comment line excluded from comparisons and digests.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// What kind of claim a row records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A quantitative inequality with explicit constants; failures flip the
    /// exit code.
    ExplicitConstantAssertion,
    /// A recorded quotient against a generic-constant bound; never asserted.
    EmpiricalRatio,
    /// Agreement with an analytically known value.
    ClosedFormCheck,
}

impl Provenance {
    fn label(self) -> &'static str {
        match self {
            Self::ExplicitConstantAssertion => "explicit-constant assertion",
            Self::EmpiricalRatio => "empirical ratio",
            Self::ClosedFormCheck => "closed-form check",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub value: f64,
    /// Numeric bound the value is compared against, when one exists.
    pub bound: Option<f64>,
    /// Textual reference (e.g. "pi^2") or error note.
    pub reference: Option<String>,
    pub provenance: Provenance,
    pub pass: Option<bool>,
    /// Set when the row could not be computed; `value` is NaN then.
    pub error: Option<String>,
}

impl ReportRow {
    pub fn assertion(name: impl Into<String>, value: f64, bound: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Some(bound),
            reference: None,
            provenance: Provenance::ExplicitConstantAssertion,
            pass: Some(pass),
            error: None,
        }
    }

    pub fn ratio(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: None,
            reference: None,
            provenance: Provenance::EmpiricalRatio,
            pass: None,
            error: None,
        }
    }

    pub fn closed_form(name: impl Into<String>, value: f64, expect: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Some(expect),
            reference: None,
            provenance: Provenance::ClosedFormCheck,
            pass: Some(pass),
            error: None,
        }
    }

    pub fn failed(name: impl Into<String>, provenance: Provenance, error: String) -> Self {
        Self {
            name: name.into(),
            value: f64::NAN,
            bound: None,
            reference: None,
            provenance,
            pass: Some(false),
            error: Some(error),
        }
    }

    pub fn with_reference(mut self, reference: impl Into<String>) -> Self {
        self.reference = Some(reference.into());
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub config_digest: String,
    pub timestamp: String,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(experiment: &str, seed: u64, config_digest: String, rows: Vec<ReportRow>) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            config_digest,
            timestamp: now_utc(),
            rows,
        }
    }

    /// True if every explicit-constant assertion computed and passed.
    pub fn all_assertions_pass(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.provenance == Provenance::ExplicitConstantAssertion)
            .all(|r| r.pass == Some(true))
    }

    /// True if some row could not be computed.
    pub fn has_numerical_failure(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    /// True if some assertion computed to a definite failure.
    pub fn has_assertion_failure(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.provenance == Provenance::ExplicitConstantAssertion
                && r.error.is_none()
                && r.pass == Some(false))
    }

    /// Deterministic CSV body: header plus one row per quantity, RFC 4180
    /// quoting, numbers at 17 significant digits.
    pub fn csv_body(&self) -> String {
        let mut out = String::new();
        out.push_str("name,value,bound_or_reference,provenance,pass\n");
        for row in &self.rows {
            let bound_or_ref = match (row.bound, &row.reference, &row.error) {
                (_, _, Some(err)) => format!("error: {err}"),
                (Some(b), _, None) => fmt17(b),
                (None, Some(r), None) => r.clone(),
                (None, None, None) => String::new(),
            };
            let pass = match row.pass {
                Some(true) => "true",
                Some(false) => "false",
                None => "",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&row.name),
                csv_field(&fmt17(row.value)),
                csv_field(&bound_or_ref),
                csv_field(row.provenance.label()),
                pass
            );
        }
        out
    }

    /// Full CSV: a timestamp comment line, then the body.
    pub fn to_csv(&self) -> String {
        format!("# generated_at,{}\n{}", self.timestamp, self.csv_body())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, dir: &Path, format: OutputFormat) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
            std::fs::write(dir.join("report.csv"), self.to_csv())?;
        }
        if matches!(format, OutputFormat::Json | OutputFormat::Both) {
            std::fs::write(dir.join("report.json"), self.to_json())?;
        }
        Ok(())
    }

    /// One pass/fail line per row with a verdict, for terminal output.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let verdict = match (row.pass, &row.error) {
                (_, Some(err)) => format!("ERROR ({err})"),
                (Some(true), None) => "pass".to_string(),
                (Some(false), None) => "FAIL".to_string(),
                (None, None) => "recorded".to_string(),
            };
            let _ = writeln!(out, "{:<56} {:>24}  {}", row.name, fmt17(row.value), verdict);
        }
        out
    }
}

/// 17 significant digits, the shortest format that round-trips f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn now_utc() -> String {
    // Seconds since the epoch; avoids a clock/format dependency.
    match std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        Ok(d) => format!("unix:{}", d.as_secs()),
        Err(_) => "unix:0".to_string(),
    }
}

/// FNV-1a 64-bit digest, hex-encoded; identifies a canonical config.
pub fn fnv1a64_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown format '{other}' (expected csv|json|both)")),
        }
    }
}
