use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RecoveryError;
use crate::dependency::DependencyKind;
use crate::dsl::PlannedArchitecture;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Package,
    Class,
    Method,
    Field,
    Variable,
}

impl CodeKind {
    /// Whether an element of this kind may be declared directly inside one
    /// of kind `parent` (None meaning the top level).
    pub fn may_be_child_of(self, parent: Option<CodeKind>) -> bool {
        use CodeKind::*;
        matches!(
            (self, parent),
            (Package, None | Some(Package))
                | (Class, None | Some(Package))
                | (Method | Field, Some(Class))
                | (Variable, Some(Method))
        )
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CodeKind::Package => "package",
            CodeKind::Class => "class",
            CodeKind::Method => "method",
            CodeKind::Field => "field",
            CodeKind::Variable => "variable",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CodeElement {
    pub path: String,
    pub kind: CodeKind,
    #[serde(default)]
    pub parent: Option<String>,
}

impl CodeElement {
    pub fn new(path: impl Into<String>, kind: CodeKind, parent: Option<&str>) -> Self {
        CodeElement { path: path.into(), kind, parent: parent.map(str::to_string) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CodeDependency {
    pub from: String,
    pub to: String,
    pub kind: DependencyKind,
}

impl CodeDependency {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: DependencyKind) -> Self {
        CodeDependency { from: from.into(), to: to.into(), kind }
    }
}

/// Code containment tree plus typed dependencies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFacts {
    pub elements: Vec<CodeElement>,
    pub dependencies: Vec<CodeDependency>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct FactsDocument {
    schema_version: u32,
    #[serde(default)]
    elements: Vec<CodeElement>,
    #[serde(default)]
    dependencies: Vec<CodeDependency>,
}

impl CodeFacts {
    /// Sorts and deduplicates both lists.
    pub fn canonicalize(&mut self) {
        self.elements.sort();
        self.elements.dedup();
        self.dependencies.sort();
        self.dependencies.dedup();
    }

    pub fn parents(&self) -> HashMap<&str, Option<&str>> {
        self.elements.iter().map(|e| (e.path.as_str(), e.parent.as_deref())).collect()
    }

    /// Checks unique paths, containment kinds, acyclicity and dependency
    /// endpoints.
    pub fn validate(&self) -> Result<(), RecoveryError> {
        let mut kinds: HashMap<&str, CodeKind> = HashMap::new();
        for e in &self.elements {
            if kinds.insert(&e.path, e.kind).is_some() {
                return Err(RecoveryError::DuplicatePath(e.path.clone()));
            }
        }
        for e in &self.elements {
            let parent_kind = match &e.parent {
                None => None,
                Some(p) => Some(*kinds.get(p.as_str()).ok_or_else(|| RecoveryError::UnknownParent {
                    path: e.path.clone(),
                    parent: p.clone(),
                })?),
            };
            if !e.kind.may_be_child_of(parent_kind) {
                return Err(RecoveryError::BadContainment {
                    path: e.path.clone(),
                    kind: e.kind,
                    parent: parent_kind.map_or_else(|| "the top level".to_string(), |k| format!("a {k}")),
                });
            }
        }
        let parents = self.parents();
        let mut acyclic: HashSet<&str> = HashSet::new();
        for e in &self.elements {
            let mut trail = Vec::new();
            let mut cur = Some(e.path.as_str());
            while let Some(p) = cur {
                if acyclic.contains(p) {
                    break;
                }
                if trail.contains(&p) {
                    return Err(RecoveryError::ContainmentCycle(p.to_string()));
                }
                trail.push(p);
                cur = parents[p];
            }
            acyclic.extend(trail);
        }
        for d in &self.dependencies {
            for end in [&d.from, &d.to] {
                if !kinds.contains_key(end.as_str()) {
                    return Err(RecoveryError::UnknownDependencyEndpoint(end.clone()));
                }
            }
        }
        Ok(())
    }
}

pub fn facts_to_json(facts: &CodeFacts) -> String {
    let doc = FactsDocument {
        schema_version: SCHEMA_VERSION,
        elements: facts.elements.clone(),
        dependencies: facts.dependencies.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("facts always serialise");
    s.push('\n');
    s
}

pub fn facts_from_json(text: &str) -> Result<CodeFacts, RecoveryError> {
    let doc: FactsDocument = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(RecoveryError::SchemaVersion(doc.schema_version));
    }
    let facts = CodeFacts { elements: doc.elements, dependencies: doc.dependencies };
    facts.validate()?;
    Ok(facts)
}

pub fn load_facts(path: impl AsRef<Path>) -> Result<CodeFacts, RecoveryError> {
    facts_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mapping {
    pub code_path: String,
    pub abstraction_id: String,
}

impl Mapping {
    pub fn new(code_path: impl Into<String>, abstraction_id: impl Into<String>) -> Self {
        Mapping { code_path: code_path.into(), abstraction_id: abstraction_id.into() }
    }
}

/// Binding of code elements to abstraction instances.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSet {
    pub mappings: Vec<Mapping>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct MappingDocument {
    schema_version: u32,
    #[serde(default)]
    mappings: Vec<Mapping>,
}

impl MappingSet {
    pub fn new(mut mappings: Vec<Mapping>) -> Self {
        mappings.sort();
        MappingSet { mappings }
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn by_path(&self) -> BTreeMap<&str, &str> {
        self.mappings.iter().map(|m| (m.code_path.as_str(), m.abstraction_id.as_str())).collect()
    }

    /// Checks every entry against the facts tree and the planned
    /// architecture.
    pub fn resolve(&self, facts: &CodeFacts, pa: &PlannedArchitecture) -> Result<(), RecoveryError> {
        let paths: HashSet<&str> = facts.elements.iter().map(|e| e.path.as_str()).collect();
        let ids: HashSet<&str> = pa.instances().iter().map(|i| i.decl.id.as_str()).collect();
        let mut seen = HashSet::new();
        for m in &self.mappings {
            if !ids.contains(m.abstraction_id.as_str()) {
                return Err(RecoveryError::UnknownAbstraction(m.abstraction_id.clone()));
            }
            if !paths.contains(m.code_path.as_str()) {
                return Err(RecoveryError::UnknownCodePath(m.code_path.clone()));
            }
            if !seen.insert(m.code_path.as_str()) {
                return Err(RecoveryError::DuplicateMapping(m.code_path.clone()));
            }
        }
        Ok(())
    }
}

pub fn mappings_to_json(set: &MappingSet) -> String {
    let doc = MappingDocument { schema_version: SCHEMA_VERSION, mappings: set.mappings.clone() };
    let mut s = serde_json::to_string_pretty(&doc).expect("mappings always serialise");
    s.push('\n');
    s
}

pub fn mappings_from_json(text: &str) -> Result<MappingSet, RecoveryError> {
    let doc: MappingDocument = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(RecoveryError::SchemaVersion(doc.schema_version));
    }
    Ok(MappingSet::new(doc.mappings))
}

/// Reads a mapping file and resolves it against `facts` and `pa`.
pub fn load_mappings(path: impl AsRef<Path>, facts: &CodeFacts, pa: &PlannedArchitecture) -> Result<MappingSet, RecoveryError> {
    let set = mappings_from_json(&fs::read_to_string(path)?)?;
    set.resolve(facts, pa)?;
    Ok(set)
}
