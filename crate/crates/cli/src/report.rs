use std::fmt::Write as _;
use std::path::Path;

use asymcenter::rational;
use asymcenter::{Error, RepresentableSeq, Q};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Exit code contract.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or invalid input: exit 2.
    Schema(String),
    /// Sequence kind does not fit the requested space: exit 3.
    Mismatch(String),
    /// A checked property failed: exit 1, with the report written first.
    Violation(Box<Report>),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Schema(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

/// Maps a library error raised while computing: kind errors are mismatches,
/// anything else means a checked identity failed.
pub fn compute_error(e: Error, report: &Report) -> Failure {
    match e {
        Error::WrongKind { .. } => Failure::Mismatch(e.to_string()),
        other => {
            let mut r = report.clone();
            r.ok = false;
            r.push("error", other.to_string());
            r.results["error"] = json!(other.to_string());
            Failure::Violation(Box::new(r))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ok: bool,
    pub results: Value,
    #[serde(skip)]
    table: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            input_digest: None,
            seed: None,
            ok: true,
            results: json!({}),
            table: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.table.push((key.into(), value.into()));
    }

    pub fn render_table(&self) -> String {
        let width = self.table.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.table {
            let pad = width - k.chars().count();
            let _ = writeln!(out, "  {k}{}  {v}", " ".repeat(pad));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Prints the table (unless JSON goes to stdout) and writes JSON if asked.
pub fn emit(report: &Report, json_out: Option<&Path>) -> Result<(), Failure> {
    match json_out {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            print!("{}", report.render_table());
            std::fs::write(p, report.to_json())
                .map_err(|e| Failure::Schema(format!("cannot write {}: {e}", p.display())))?;
        }
        None => print!("{}", report.render_table()),
    }
    Ok(())
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn q(x: &Q) -> Value {
    Value::String(rational::format(x))
}

pub fn qs(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

pub fn qstr(xs: &[Q]) -> String {
    format!("({})", xs.iter().map(rational::format).collect::<Vec<_>>().join(", "))
}

/// Twelve significant digits.
pub fn f(x: f64) -> Value {
    json!(round12(x))
}

pub fn fs(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| f(x)).collect())
}

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn fstr(xs: &[f64]) -> String {
    format!("({})", xs.iter().map(|x| format!("{}", round12(*x))).collect::<Vec<_>>().join(", "))
}

/// The offending instance as a standalone replayable document.
pub fn witness(seqs: &[RepresentableSeq]) -> Value {
    serde_json::from_str(&asymcenter::io::serialize_instance(seqs)).expect("instance JSON parses")
}
