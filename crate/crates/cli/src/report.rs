//! Verification reports and their JSON / text renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::scenario::Scenario;

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(CliError::Usage(format!("unknown format `{other}`; expected json or text"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial_index: u64,
    /// Derived seed of the failing trial.
    pub seed: u64,
    pub reason: String,
    /// The input scenario narrowed to the failing trial; feeding it back to
    /// the suite reproduces the failure.
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub id: String,
    pub instances: usize,
    /// Worst residual observed; failures that produced no number count as
    /// `f64::MAX` so that the report stays valid JSON.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyRecord {
    pub fn new(id: &str, tolerance: f64) -> Self {
        Self {
            id: id.to_string(),
            instances: 0,
            max_residual: 0.0,
            tolerance,
            pass: true,
            detail: None,
            witness: None,
        }
    }

    pub(crate) fn observe(&mut self, residual: f64, detail: Option<String>) {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        self.instances += 1;
        self.max_residual = self.max_residual.max(residual);
        self.pass = self.max_residual <= self.tolerance;
        if self.detail.is_none() {
            self.detail = detail;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Toolchain {
    pub package: String,
    pub version: String,
    pub rng: String,
}

impl Default for Toolchain {
    fn default() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "ChaCha8, per-trial seeds via SplitMix64(seed, trial)".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub scenario_echo: Scenario,
    pub properties: Vec<PropertyRecord>,
    pub toolchain: Toolchain,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    /// A report with no property records.
    pub fn new(scenario: Scenario) -> Self {
        Self {
            version: REPORT_VERSION.to_string(),
            scenario_echo: scenario,
            properties: Vec::new(),
            toolchain: Toolchain::default(),
            wall_time_ms: 0.0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: "<report>".into(),
            field: String::new(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.scenario_echo;
        let _ = writeln!(
            out,
            "dim {}  atoms {}  trials {}  seed {}  ({:.1} ms)",
            s.dim, s.atoms, s.trials, s.seed, self.wall_time_ms
        );
        let _ = writeln!(
            out,
            "{:<20} {:>9} {:>13} {:>10}  verdict",
            "property", "instances", "max_residual", "tolerance"
        );
        for p in &self.properties {
            let _ = writeln!(
                out,
                "{:<20} {:>9} {:>13.3e} {:>10.1e}  {}",
                p.id,
                p.instances,
                p.max_residual,
                p.tolerance,
                if p.pass { "PASS" } else { "FAIL" }
            );
            if let Some(d) = &p.detail {
                let _ = writeln!(out, "    {d}");
            }
            if let Some(w) = &p.witness {
                let _ = writeln!(out, "    witness: trial {} (seed {}): {}", w.trial_index, w.seed, w.reason);
            }
        }
        let passed = self.properties.iter().filter(|p| p.pass).count();
        let _ = writeln!(out, "{passed}/{} properties passed", self.properties.len());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

pub fn emit_report(report: &SuiteReport, path: &Path, format: Format) -> Result<()> {
    std::fs::write(path, report.render(format)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
