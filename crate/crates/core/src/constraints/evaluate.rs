use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use super::report::ConformanceReport;
use super::{Category, Constraint, ConstraintModality, ConstraintSet, DriftClass, Finding, Status, IMPLICIT_DENY_PREFIX};
use crate::dependency::DependencyKind;
use crate::kind::AbstractionKind;
use crate::model::ArchModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Flag relations between declared abstractions that no rule covers.
    pub implicit_deny: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { implicit_deny: true }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("constraint `{constraint}` references `{id}`, which the planned architecture does not declare")]
    UnknownId { constraint: String, id: String },
}

#[derive(Default)]
struct Link {
    kinds: BTreeSet<DependencyKind>,
    direct: bool,
}

impl Link {
    fn describe(&self) -> String {
        let kinds: Vec<_> = self.kinds.iter().map(|k| k.as_str()).collect();
        let kinds = if kinds.is_empty() { "unspecified".to_string() } else { kinds.join(", ") };
        if self.direct {
            format!("kinds: {kinds}")
        } else {
            format!("kinds: {kinds}; indirect")
        }
    }
}

/// Name-level index over the recovered model.
struct Index<'a> {
    /// name -> (stereotype, ancestors innermost first)
    elements: HashMap<&'a str, Vec<(AbstractionKind, Vec<(&'a str, AbstractionKind)>)>>,
    links: BTreeMap<(&'a str, &'a str), Link>,
}

impl<'a> Index<'a> {
    fn new(ca: &'a ArchModel) -> Self {
        let located = ca.elements();
        let by_id: HashMap<&str, (&str, AbstractionKind, Option<&str>)> = located
            .iter()
            .map(|l| (l.element.id.as_str(), (l.element.name.as_str(), l.element.stereotype, l.parent.map(|p| p.id.as_str()))))
            .collect();
        let mut elements: HashMap<&str, Vec<_>> = HashMap::new();
        for l in &located {
            let mut ancestors = Vec::new();
            let mut cur = l.parent.map(|p| p.id.as_str());
            while let Some(id) = cur {
                let (name, kind, parent) = by_id[id];
                ancestors.push((name, kind));
                cur = parent;
            }
            elements.entry(l.element.name.as_str()).or_default().push((l.element.stereotype, ancestors));
        }
        let mut links: BTreeMap<(&str, &str), Link> = BTreeMap::new();
        for r in &ca.relations {
            let (Some(from), Some(to)) = (by_id.get(r.from.as_str()), by_id.get(r.to.as_str())) else {
                continue;
            };
            let link = links.entry((from.0, to.0)).or_default();
            link.kinds.extend(r.kinds.iter().copied());
            link.direct |= !r.indirect;
        }
        Index { elements, links }
    }

    fn matching(&self, name: &str, kind: AbstractionKind) -> impl Iterator<Item = &Vec<(&'a str, AbstractionKind)>> {
        self.elements.get(name).into_iter().flatten().filter(move |(k, _)| *k == kind).map(|(_, a)| a)
    }
}

fn drift_class(category: Category) -> DriftClass {
    match category {
        Category::Existence => DriftClass::MissingAbstraction,
        Category::Structural => DriftClass::StructuralViolation,
        Category::Communication => DriftClass::CommunicationDrift,
        Category::Domain => DriftClass::DomainDrift,
    }
}

fn check(c: &Constraint, idx: &Index<'_>) -> Finding {
    let (ok, detail) = match c.category {
        Category::Existence => {
            if idx.matching(&c.subject, c.subject_kind).next().is_some() {
                (true, format!("{} `{}` present", c.subject_kind, c.subject))
            } else {
                (false, format!("no {} named `{}`", c.subject_kind, c.subject))
            }
        }
        Category::Structural => {
            let container = c.container.as_deref().unwrap_or_default();
            let ckind = c.container_kind.unwrap_or(AbstractionKind::Managing);
            let mut present = idx.matching(&c.subject, c.subject_kind).peekable();
            if present.peek().is_none() {
                (true, format!("`{}` absent; containment not applicable", c.subject))
            } else if present.all(|anc| anc.iter().any(|&(n, k)| n == container && k == ckind)) {
                (true, format!("inside {ckind} `{container}`"))
            } else {
                (false, format!("`{}` is not inside {ckind} `{container}`", c.subject))
            }
        }
        Category::Communication | Category::Domain => {
            let object = c.object.as_deref().unwrap_or_default();
            let link = idx.links.get(&(c.subject.as_str(), object));
            match (c.modality, link) {
                (ConstraintModality::Require, Some(l)) => (true, format!("relation present ({})", l.describe())),
                (ConstraintModality::Require, None) => (false, "required relation absent".to_string()),
                (ConstraintModality::Forbid, Some(l)) => (false, format!("forbidden relation present ({})", l.describe())),
                (ConstraintModality::Forbid, None) => (true, "no relation".to_string()),
            }
        }
    };
    Finding {
        constraint_id: c.id.clone(),
        category: c.category,
        status: if ok { Status::Pass } else { Status::Violation },
        subject: c.subject.clone(),
        object: c.object.clone(),
        drift_class: if ok { None } else { Some(drift_class(c.category)) },
        detail,
    }
}

/// Evaluates every constraint against `ca` and returns a sorted report.
pub fn evaluate(set: &ConstraintSet, ca: &ArchModel, options: CheckOptions) -> Result<ConformanceReport, EvalError> {
    for c in &set.constraints {
        for id in std::iter::once(&c.subject).chain(c.object.iter()).chain(c.container.iter()) {
            if !set.universe.contains_key(id) {
                return Err(EvalError::UnknownId { constraint: c.id.clone(), id: id.clone() });
            }
        }
    }
    let idx = Index::new(ca);
    let mut findings: Vec<Finding> = set.constraints.par_iter().map(|c| check(c, &idx)).collect();

    if options.implicit_deny {
        let covered: HashSet<(&str, &str)> = set
            .constraints
            .iter()
            .filter(|c| matches!(c.category, Category::Communication | Category::Domain))
            .filter_map(|c| c.object.as_deref().map(|o| (c.subject.as_str(), o)))
            .collect();
        for ((from, to), link) in &idx.links {
            if set.universe.contains_key(*from) && set.universe.contains_key(*to) && !covered.contains(&(*from, *to)) {
                findings.push(Finding {
                    constraint_id: format!("{IMPLICIT_DENY_PREFIX}{from}_{to}"),
                    category: Category::Communication,
                    status: Status::Violation,
                    subject: from.to_string(),
                    object: Some(to.to_string()),
                    drift_class: Some(DriftClass::UndeclaredInteraction),
                    detail: format!("no rule allows this relation ({})", link.describe()),
                });
            }
        }
    }
    Ok(ConformanceReport::new(set.pa_name.clone(), ca.name.clone(), findings))
}
