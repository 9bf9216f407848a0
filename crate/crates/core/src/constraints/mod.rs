//! Constraint generation from a planned architecture and evaluation against
//! a recovered model.

mod evaluate;
mod generate;
mod report;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kind::AbstractionKind;

pub use evaluate::{evaluate, CheckOptions, EvalError};
pub use generate::generate_constraints;
pub use report::{load_report, report_from_json, report_to_json, save_report, ConformanceReport, ReportError, Summary, Tally};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Existence,
    Structural,
    Communication,
    Domain,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Existence, Category::Structural, Category::Communication, Category::Domain];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Existence => "existence",
            Category::Structural => "structural",
            Category::Communication => "communication",
            Category::Domain => "domain",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintModality {
    Require,
    Forbid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Constraint {
    pub id: String,
    pub category: Category,
    pub modality: ConstraintModality,
    pub subject: String,
    pub subject_kind: AbstractionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_kind: Option<AbstractionKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub container: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub container_kind: Option<AbstractionKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstraintSet {
    pub pa_name: String,
    /// Every declared abstraction id with its kind.
    pub universe: BTreeMap<String, AbstractionKind>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn count(&self, category: Category) -> usize {
        self.constraints.iter().filter(|c| c.category == category).count()
    }

    pub fn get(&self, id: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriftClass {
    MissingAbstraction,
    StructuralViolation,
    CommunicationDrift,
    DomainDrift,
    UndeclaredInteraction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Finding {
    pub constraint_id: String,
    pub category: Category,
    pub status: Status,
    pub subject: String,
    pub object: Option<String>,
    pub drift_class: Option<DriftClass>,
    pub detail: String,
}

/// Id prefix of findings raised by the implicit-deny policy.
pub const IMPLICIT_DENY_PREFIX: &str = "implicit_deny_";

impl Finding {
    pub fn is_violation(&self) -> bool {
        self.status == Status::Violation
    }

    /// True for communication and domain findings that check a must-use.
    pub fn is_require(&self) -> bool {
        self.constraint_id.starts_with("access_") || self.constraint_id.starts_with("domain_access_")
    }
}
