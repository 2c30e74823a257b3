//! Machine-readable check reports. Checks are sorted by key before writing, so the output
//! does not depend on the order in which parallel checks finished.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::VerifyError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    NumericPass { residual: f64 },
    Fail { witness: String },
}

impl Status {
    pub fn passed(&self) -> bool {
        !matches!(self, Status::Fail { .. })
    }

    pub fn fail(w: impl Into<String>) -> Self {
        Status::Fail { witness: w.into() }
    }

    /// Exact pass when `ok`, else a failure carrying the witness.
    pub fn exact(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Status::ExactPass
        } else {
            Status::Fail { witness: witness() }
        }
    }

    pub fn numeric(residual: f64, tol: f64, witness: impl FnOnce() -> String) -> Self {
        if residual.is_finite() && residual < tol {
            Status::NumericPass { residual }
        } else {
            Status::Fail { witness: witness() }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub key: String,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    pub micros: u64,
}

impl Check {
    pub fn new(key: impl Into<String>, status: Status) -> Self {
        Check { key: key.into(), status, detail: String::new(), micros: 0 }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    /// Runs f and records its wall time; an error becomes a failed check.
    pub fn timed(key: impl Into<String>, f: impl FnOnce() -> Result<Check, VerifyError>) -> Check {
        let key = key.into();
        let start = Instant::now();
        let mut c = match f() {
            Ok(c) => c,
            Err(e) => Check::new(key.clone(), Status::fail(e.to_string())),
        };
        if c.key.is_empty() {
            c.key = key;
        }
        c.micros = start.elapsed().as_micros() as u64;
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<u8>,
    /// Parameter values as exact rationals ("p/q").
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    /// Phase name -> microseconds.
    pub timings: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), example: None, params: BTreeMap::new(), checks: vec![], timings: BTreeMap::new() }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.checks.sort_by(|a, b| a.key.cmp(&b.key));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.status.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn write(&self, path: &Path) -> Result<(), VerifyError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| VerifyError::Io { path: dir.display().to_string(), source })?;
        }
        std::fs::write(path, self.to_json()).map_err(|source| VerifyError::Io { path: path.display().to_string(), source })
    }

    /// One line per check, failures first.
    pub fn summary(&self) -> String {
        let mut lines = vec![];
        let mut ordered: Vec<&Check> = self.failures().collect();
        ordered.extend(self.checks.iter().filter(|c| c.status.passed()));
        for c in ordered {
            let s = match &c.status {
                Status::ExactPass => "exact-pass".to_string(),
                Status::NumericPass { residual } => format!("numeric-pass ({residual:.2e})"),
                Status::Fail { witness } => format!("FAIL: {witness}"),
            };
            lines.push(format!("{:<48} {s}", c.key));
        }
        let n_fail = self.failures().count();
        lines.push(format!("{} checks, {} failed", self.checks.len(), n_fail));
        lines.join("\n")
    }
}
