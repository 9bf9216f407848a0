//! The twenty predefined MAPE-K domain rules and their activation toggles.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{PlannedArchitecture, RuleOrigin};
use crate::kind::AbstractionKind::{self, *};

/// Direction of a communication rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Modality {
    #[serde(rename = "must-use")]
    MustUse,
    #[serde(rename = "must-not-use")]
    MustNotUse,
}

impl Modality {
    pub fn as_str(self) -> &'static str {
        match self {
            Modality::MustUse => "must-use",
            Modality::MustNotUse => "must-not-use",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "must-use" => Some(Modality::MustUse),
            "must-not-use" => Some(Modality::MustNotUse),
            _ => None,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Modality::MustUse => Modality::MustNotUse,
            Modality::MustNotUse => Modality::MustUse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainRule {
    /// 1-based position in the matrix.
    pub number: usize,
    pub source: AbstractionKind,
    pub target: AbstractionKind,
    pub modality: Modality,
    pub active: bool,
}

impl DomainRule {
    /// Configuration key, e.g. `Monitor->Analyzer`.
    pub fn key(&self) -> String {
        format!("{}->{}", self.source, self.target)
    }
}

#[derive(Debug, Error)]
pub enum DomainConfigError {
    #[error("domain-rule config is not a JSON object of booleans: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unknown domain-rule key `{0}`")]
    UnknownKey(String),
}

/// Pairs that must communicate; every other off-diagonal pair over the five
/// MAPE-K kinds must not.
const MUST_USE_PAIRS: [(AbstractionKind, AbstractionKind); 7] = [
    (Monitor, Analyzer),
    (Analyzer, Planner),
    (Planner, Executor),
    (Monitor, Knowledge),
    (Analyzer, Knowledge),
    (Planner, Knowledge),
    (Executor, Knowledge),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainRuleMatrix {
    rules: Vec<DomainRule>,
}

impl Default for DomainRuleMatrix {
    fn default() -> Self {
        Self::all_active()
    }
}

impl DomainRuleMatrix {
    pub fn all_active() -> Self {
        let mut rules = Vec::with_capacity(20);
        for source in AbstractionKind::MAPE_K {
            for target in AbstractionKind::MAPE_K {
                if source == target {
                    continue;
                }
                let modality = if MUST_USE_PAIRS.contains(&(source, target)) {
                    Modality::MustUse
                } else {
                    Modality::MustNotUse
                };
                rules.push(DomainRule {
                    number: rules.len() + 1,
                    source,
                    target,
                    modality,
                    active: true,
                });
            }
        }
        DomainRuleMatrix { rules }
    }

    /// Parses a JSON object of boolean toggles. Keys left out stay active.
    pub fn from_config_json(text: &str) -> Result<Self, DomainConfigError> {
        let toggles: BTreeMap<String, bool> = serde_json::from_str(text)?;
        let mut matrix = Self::all_active();
        for (key, active) in toggles {
            let rule = matrix
                .rules
                .iter_mut()
                .find(|r| r.key() == key)
                .ok_or(DomainConfigError::UnknownKey(key))?;
            rule.active = active;
        }
        Ok(matrix)
    }

    pub fn to_config_json(&self) -> String {
        let toggles: BTreeMap<String, bool> = self.rules.iter().map(|r| (r.key(), r.active)).collect();
        serde_json::to_string_pretty(&toggles).expect("toggle map serializes")
    }

    pub fn rules(&self) -> &[DomainRule] {
        &self.rules
    }

    pub fn active_rules(&self) -> impl Iterator<Item = &DomainRule> {
        self.rules.iter().filter(|r| r.active)
    }

    pub fn lookup(&self, source: AbstractionKind, target: AbstractionKind) -> Option<&DomainRule> {
        self.rules.iter().find(|r| r.source == source && r.target == target)
    }

    pub fn set_active(&mut self, source: AbstractionKind, target: AbstractionKind, active: bool) -> bool {
        match self.rules.iter_mut().find(|r| r.source == source && r.target == target) {
            Some(rule) => {
                rule.active = active;
                true
            }
            None => false,
        }
    }
}

/// A domain rule applied to one ordered pair of members of a
/// `withDomainRules` loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopDomainPair<'a> {
    pub loop_id: &'a str,
    pub source: &'a str,
    pub target: &'a str,
    pub rule: &'a DomainRule,
}

/// Enumerates active domain rules over member pairs of every loop flagged
/// `withDomainRules`. Pairs already governed by a user rule in either
/// modality are left out.
pub fn loop_domain_pairs<'a>(pa: &'a PlannedArchitecture, matrix: &'a DomainRuleMatrix) -> Vec<LoopDomainPair<'a>> {
    let user: HashSet<(&str, &str)> = pa
        .rules
        .iter()
        .filter(|r| r.origin == RuleOrigin::User)
        .map(|r| (r.source.id.as_str(), r.target.id.as_str()))
        .collect();
    let mut out = Vec::new();
    for lp in pa.loops().into_iter().filter(|l| l.domain_rules) {
        let members = pa.loop_members(&lp.id);
        for rule in matrix.active_rules() {
            for a in members.iter().filter(|m| m.kind == rule.source) {
                for b in members.iter().filter(|m| m.kind == rule.target) {
                    if a.id != b.id && !user.contains(&(a.id.as_str(), b.id.as_str())) {
                        out.push(LoopDomainPair { loop_id: &lp.id, source: &a.id, target: &b.id, rule });
                    }
                }
            }
        }
    }
    out
}
