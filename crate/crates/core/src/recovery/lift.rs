use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::build::Attribution;
use super::facts::{CodeFacts, MappingSet};
use crate::dependency::DependencyKind;
use crate::model::{ArchModel, ArchRelation};

/// Adds indirect relations for code paths that reach another abstraction
/// only through unmapped code. Existing relations are left alone.
pub fn lift_indirect(ca: &ArchModel, facts: &CodeFacts, mappings: &MappingSet) -> ArchModel {
    let attr = Attribution::new(facts, mappings);
    let present: BTreeSet<&str> = ca.elements().iter().map(|l| l.element.id.as_str()).collect();
    let mut succ: HashMap<&str, Vec<(&str, DependencyKind)>> = HashMap::new();
    for d in &facts.dependencies {
        succ.entry(d.from.as_str()).or_default().push((d.to.as_str(), d.kind));
    }

    let mut lifted: BTreeMap<(&str, &str), BTreeSet<DependencyKind>> = BTreeMap::new();
    for e in &facts.elements {
        let Some(a) = attr.of(&e.path) else { continue };
        // Breadth-first through unattributed nodes only.
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        for &(next, _) in succ.get(e.path.as_str()).into_iter().flatten() {
            if attr.of(next).is_none() && seen.insert(next) {
                queue.push_back(next);
            }
        }
        while let Some(node) = queue.pop_front() {
            for &(next, kind) in succ.get(node).into_iter().flatten() {
                match attr.of(next) {
                    Some(b) if b != a => {
                        lifted.entry((a, b)).or_default().insert(kind);
                    }
                    Some(_) => {}
                    None => {
                        if seen.insert(next) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }

    let mut out = ca.clone();
    for ((a, b), kinds) in lifted {
        if !present.contains(a) || !present.contains(b) || out.relation(a, b).is_some() {
            continue;
        }
        let mut r = ArchRelation::new(a, b);
        r.kinds = kinds;
        r.indirect = true;
        out.relations.push(r);
    }
    out.sort_relations();
    out
}
