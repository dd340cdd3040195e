//! JSON verification report.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{EqgError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_anchor: String,
    pub params: Map<String, Value>,
    /// `None` when the check could not be evaluated; see `params.error`.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tau: [f64; 2],
    pub hbar: [f64; 2],
    pub jet_order: usize,
    pub trunc: usize,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol_tier: String,
    pub suites: Vec<String>,
    pub parallel: bool,
    pub version: String,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub metadata: Metadata,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    /// True iff every record passes (vacuously for an empty report).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| EqgError::Config(format!("cannot write report to {}: {e}", path.display())))
    }
}
