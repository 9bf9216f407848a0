use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::facts::{CodeFacts, MappingSet};
use crate::dsl::PlannedArchitecture;
use crate::model::{ArchElement, ArchModel, ArchRelation, CURRENT_ARCHITECTURE};

/// Resolves code paths to the abstraction of their nearest mapped
/// ancestor-or-self.
pub(crate) struct Attribution<'a> {
    parents: HashMap<&'a str, Option<&'a str>>,
    mapped: BTreeMap<&'a str, &'a str>,
}

impl<'a> Attribution<'a> {
    pub(crate) fn new(facts: &'a CodeFacts, mappings: &'a MappingSet) -> Self {
        Attribution { parents: facts.parents(), mapped: mappings.by_path() }
    }

    pub(crate) fn of(&self, path: &'a str) -> Option<&'a str> {
        let mut cur = Some(path);
        while let Some(p) = cur {
            if let Some(a) = self.mapped.get(p) {
                return Some(a);
            }
            cur = self.parents.get(p).copied().flatten();
        }
        None
    }

    /// Abstraction of the nearest strict ancestor mapped to something other
    /// than `own`.
    fn enclosing(&self, path: &'a str, own: &str) -> Option<&'a str> {
        let mut cur = self.parents.get(path).copied().flatten();
        while let Some(p) = cur {
            match self.mapped.get(p) {
                Some(a) if *a != own => return Some(a),
                _ => cur = self.parents.get(p).copied().flatten(),
            }
        }
        None
    }
}

/// Result of recovering a current architecture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub model: ArchModel,
    /// Hierarchy contradictions between code and planned architecture.
    pub warnings: Vec<String>,
}

/// Builds the current architecture: one element per mapped abstraction,
/// nested as in the code, with every direct cross-abstraction dependency
/// aggregated into a relation.
pub fn build_ca(facts: &CodeFacts, mappings: &MappingSet, pa: &PlannedArchitecture) -> Recovered {
    let attr = Attribution::new(facts, mappings);
    let instances = pa.instances();
    let order: HashMap<&str, usize> = instances.iter().enumerate().map(|(i, d)| (d.decl.id.as_str(), i)).collect();
    let pa_parent: HashMap<&str, Option<&str>> =
        instances.iter().map(|i| (i.decl.id.as_str(), i.parent.map(|p| p.id.as_str()))).collect();
    let pa_ancestors = |id: &str| -> Vec<&str> {
        let mut out = Vec::new();
        let mut cur = pa_parent.get(id).copied().flatten();
        while let Some(p) = cur {
            out.push(p);
            cur = pa_parent.get(p).copied().flatten();
        }
        out
    };

    let mut implementations: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for m in &mappings.mappings {
        if order.contains_key(m.abstraction_id.as_str()) {
            implementations.entry(&m.abstraction_id).or_default().insert(&m.code_path);
        }
    }

    let mut warnings = Vec::new();
    let mut parent_of: BTreeMap<&str, Option<&str>> = BTreeMap::new();
    for (&abs, paths) in &implementations {
        let ancestors = pa_ancestors(abs);
        let mut best: Option<(usize, &str)> = None;
        let mut conflict = false;
        for &path in paths {
            let Some(cand) = attr.enclosing(path, abs) else { continue };
            match ancestors.iter().position(|a| *a == cand) {
                Some(dist) => {
                    if best.is_none_or(|(d, _)| dist < d) {
                        best = Some((dist, cand));
                    }
                }
                None => {
                    conflict = true;
                    warnings.push(format!(
                        "`{path}` maps to `{abs}` but sits inside code mapped to `{cand}`, which does not contain `{abs}` in the planned architecture"
                    ));
                }
            }
        }
        if best.is_none() && conflict {
            warnings.push(format!("`{abs}` attached at the model root"));
        }
        parent_of.insert(abs, best.map(|(_, c)| c));
    }

    let mut children: HashMap<Option<&str>, Vec<&str>> = HashMap::new();
    for (&abs, &parent) in &parent_of {
        children.entry(parent).or_default().push(abs);
    }
    for list in children.values_mut() {
        list.sort_by_key(|id| order[id]);
    }
    fn make(id: &str, pa: &PlannedArchitecture, children: &HashMap<Option<&str>, Vec<&str>>, impls: &BTreeMap<&str, BTreeSet<&str>>) -> ArchElement {
        let kind = pa.kind_of(id).expect("mapped ids are declared");
        let mut e = ArchElement::new(id, kind);
        e.implementations = impls[id].iter().map(|s| s.to_string()).collect();
        e.children = children.get(&Some(id)).into_iter().flatten().map(|c| make(c, pa, children, impls)).collect();
        e
    }

    let mut model = ArchModel::new(CURRENT_ARCHITECTURE);
    model.roots = children.get(&None).into_iter().flatten().map(|r| make(r, pa, &children, &implementations)).collect();

    let mut relations: BTreeMap<(&str, &str), ArchRelation> = BTreeMap::new();
    for d in &facts.dependencies {
        let (Some(a), Some(b)) = (attr.of(&d.from), attr.of(&d.to)) else { continue };
        if a == b || !parent_of.contains_key(a) || !parent_of.contains_key(b) {
            continue;
        }
        relations.entry((a, b)).or_insert_with(|| ArchRelation::new(a, b)).record(d.kind);
    }
    model.relations = relations.into_values().collect();
    Recovered { model, warnings }
}
