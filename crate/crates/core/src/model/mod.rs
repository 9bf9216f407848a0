//! Structure model shared by planned and current architectures.

mod from_pa;
mod io;
mod view;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dependency::DependencyKind;
use crate::kind::AbstractionKind;

pub use from_pa::{pa_to_model, pa_to_model_with_domain_rules};
pub use io::{load_model, load_model_document, model_from_json, model_to_json, save_model, ModelDocument};
pub use view::{to_package_view, Package, PackageDependency, PackageRef, PackageView};

pub const PLANNED_ARCHITECTURE: &str = "Planned Architecture";
pub const CURRENT_ARCHITECTURE: &str = "Current Architecture";

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read or write model: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schemaVersion {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("element id `{0}` is used more than once")]
    DuplicateId(String),
    #[error("relation {from} -> {to} references unknown element `{missing}`")]
    DanglingEndpoint { from: String, to: String, missing: String },
    #[error("relation from `{0}` to itself")]
    SelfRelation(String),
    #[error("a {child} (`{child_id}`) cannot be nested inside a {parent} (`{parent_id}`)")]
    InvalidNesting { child: AbstractionKind, child_id: String, parent: AbstractionKind, parent_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchElement {
    pub id: String,
    pub name: String,
    pub stereotype: AbstractionKind,
    #[serde(default)]
    pub children: Vec<ArchElement>,
    /// Code element paths realising this element; empty in planned models.
    #[serde(default)]
    pub implementations: Vec<String>,
}

impl ArchElement {
    pub fn new(id: impl Into<String>, stereotype: AbstractionKind) -> Self {
        let id = id.into();
        ArchElement { name: id.clone(), id, stereotype, children: Vec::new(), implementations: Vec::new() }
    }

    pub fn with_children(mut self, children: Vec<ArchElement>) -> Self {
        self.children = children;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchRelation {
    pub from: String,
    pub to: String,
    pub kinds: BTreeSet<DependencyKind>,
    /// Number of code-level dependencies aggregated per kind.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub occurrences: BTreeMap<DependencyKind, u32>,
    #[serde(default)]
    pub indirect: bool,
}

impl ArchRelation {
    pub fn new(from: impl Into<String>, to: impl Into<String>) -> Self {
        ArchRelation {
            from: from.into(),
            to: to.into(),
            kinds: BTreeSet::new(),
            occurrences: BTreeMap::new(),
            indirect: false,
        }
    }

    pub fn record(&mut self, kind: DependencyKind) {
        self.kinds.insert(kind);
        *self.occurrences.entry(kind).or_insert(0) += 1;
    }
}

/// An element seen during a walk, with its parent and depth (roots are 1).
#[derive(Debug, Clone, Copy)]
pub struct Located<'a> {
    pub element: &'a ArchElement,
    pub parent: Option<&'a ArchElement>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchModel {
    pub name: String,
    #[serde(default)]
    pub roots: Vec<ArchElement>,
    #[serde(default)]
    pub relations: Vec<ArchRelation>,
}

impl ArchModel {
    pub fn new(name: impl Into<String>) -> Self {
        ArchModel { name: name.into(), roots: Vec::new(), relations: Vec::new() }
    }

    /// Pre-order walk over every element.
    pub fn elements(&self) -> Vec<Located<'_>> {
        fn visit<'a>(e: &'a ArchElement, parent: Option<&'a ArchElement>, depth: usize, out: &mut Vec<Located<'a>>) {
            out.push(Located { element: e, parent, depth });
            for c in &e.children {
                visit(c, Some(e), depth + 1, out);
            }
        }
        let mut out = Vec::new();
        for r in &self.roots {
            visit(r, None, 1, &mut out);
        }
        out
    }

    pub fn element_count(&self) -> usize {
        self.elements().len()
    }

    pub fn find(&self, id: &str) -> Option<&ArchElement> {
        self.elements().into_iter().map(|l| l.element).find(|e| e.id == id)
    }

    pub fn relation(&self, from: &str, to: &str) -> Option<&ArchRelation> {
        self.relations.iter().find(|r| r.from == from && r.to == to)
    }

    /// Checks id uniqueness, relation endpoints and stereotype nesting.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut ids = HashSet::new();
        for l in self.elements() {
            let e = l.element;
            if !ids.insert(e.id.as_str()) {
                return Err(ModelError::DuplicateId(e.id.clone()));
            }
            match l.parent {
                Some(p) if !e.stereotype.may_nest_within(p.stereotype) => {
                    return Err(ModelError::InvalidNesting {
                        child: e.stereotype,
                        child_id: e.id.clone(),
                        parent: p.stereotype,
                        parent_id: p.id.clone(),
                    })
                }
                _ => {}
            }
        }
        for r in &self.relations {
            if r.from == r.to {
                return Err(ModelError::SelfRelation(r.from.clone()));
            }
            for end in [&r.from, &r.to] {
                if !ids.contains(end.as_str()) {
                    return Err(ModelError::DanglingEndpoint {
                        from: r.from.clone(),
                        to: r.to.clone(),
                        missing: end.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Maps each element id to its parent id.
    pub fn parent_index(&self) -> HashMap<&str, Option<&str>> {
        self.elements()
            .into_iter()
            .map(|l| (l.element.id.as_str(), l.parent.map(|p| p.id.as_str())))
            .collect()
    }

    /// Sorts relations by endpoints so serialisation is canonical.
    pub fn sort_relations(&mut self) {
        self.relations.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    }
}
