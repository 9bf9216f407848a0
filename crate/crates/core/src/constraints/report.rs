use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Category, Finding, Status};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub violation: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub existence: Tally,
    pub structural: Tally,
    pub communication: Tally,
    pub domain: Tally,
}

impl Summary {
    pub fn tally(findings: &[Finding]) -> Self {
        let mut s = Summary::default();
        for f in findings {
            let t = s.get_mut(f.category);
            match f.status {
                Status::Pass => t.pass += 1,
                Status::Violation => t.violation += 1,
            }
        }
        s
    }

    pub fn get(&self, c: Category) -> Tally {
        match c {
            Category::Existence => self.existence,
            Category::Structural => self.structural,
            Category::Communication => self.communication,
            Category::Domain => self.domain,
        }
    }

    fn get_mut(&mut self, c: Category) -> &mut Tally {
        match c {
            Category::Existence => &mut self.existence,
            Category::Structural => &mut self.structural,
            Category::Communication => &mut self.communication,
            Category::Domain => &mut self.domain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConformanceReport {
    pub schema_version: u32,
    pub pa_name: String,
    pub ca_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pa_hash: Option<String>,
    pub summary: Summary,
    pub findings: Vec<Finding>,
}

impl ConformanceReport {
    /// Sorts findings by (category, constraint id) and tallies them.
    pub fn new(pa_name: String, ca_name: String, mut findings: Vec<Finding>) -> Self {
        findings.sort_by(|a, b| (a.category, &a.constraint_id).cmp(&(b.category, &b.constraint_id)));
        ConformanceReport {
            schema_version: SCHEMA_VERSION,
            pa_name,
            ca_name,
            pa_hash: None,
            summary: Summary::tally(&findings),
            findings,
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.is_violation())
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn is_conformant(&self) -> bool {
        self.violation_count() == 0
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot read or write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schemaVersion {0}")]
    SchemaVersion(u32),
    #[error("report summary does not match its findings")]
    SummaryMismatch,
}

pub fn report_to_json(report: &ConformanceReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialise");
    s.push('\n');
    s
}

pub fn report_from_json(text: &str) -> Result<ConformanceReport, ReportError> {
    let report: ConformanceReport = serde_json::from_str(text)?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(ReportError::SchemaVersion(report.schema_version));
    }
    if Summary::tally(&report.findings) != report.summary {
        return Err(ReportError::SummaryMismatch);
    }
    Ok(report)
}

pub fn save_report(report: &ConformanceReport, path: impl AsRef<Path>) -> Result<(), ReportError> {
    fs::write(path, report_to_json(report))?;
    Ok(())
}

pub fn load_report(path: impl AsRef<Path>) -> Result<ConformanceReport, ReportError> {
    report_from_json(&fs::read_to_string(path)?)
}
