use std::collections::HashSet;

use super::{ArchElement, ArchModel, ArchRelation, PLANNED_ARCHITECTURE};
use crate::domain::{loop_domain_pairs, DomainRuleMatrix, Modality};
use crate::dsl::{Declaration, PlannedArchitecture};

fn element(d: &Declaration) -> ArchElement {
    ArchElement::new(d.id.clone(), d.kind).with_children(d.children.iter().map(element).collect())
}

/// Mirrors the declaration tree and turns every must-use rule with
/// declared endpoints into a relation.
pub fn pa_to_model(pa: &PlannedArchitecture) -> ArchModel {
    let mut model = ArchModel::new(PLANNED_ARCHITECTURE);
    model.roots = pa.subsystems().map(element).collect();
    let declared: HashSet<&str> = pa.instances().iter().map(|i| i.decl.id.as_str()).collect();
    let mut seen = HashSet::new();
    for r in pa.rules.iter().filter(|r| r.modality == Modality::MustUse) {
        let (s, t) = (r.source.id.as_str(), r.target.id.as_str());
        if s != t && declared.contains(s) && declared.contains(t) && seen.insert((s, t)) {
            model.relations.push(ArchRelation::new(s, t));
        }
    }
    model
}

/// Like [`pa_to_model`], plus one relation per active must-use domain rule
/// inside loops flagged `withDomainRules`.
pub fn pa_to_model_with_domain_rules(pa: &PlannedArchitecture, matrix: &DomainRuleMatrix) -> ArchModel {
    let mut model = pa_to_model(pa);
    for pair in loop_domain_pairs(pa, matrix) {
        if pair.rule.modality == Modality::MustUse && model.relation(pair.source, pair.target).is_none() {
            model.relations.push(ArchRelation::new(pair.source, pair.target));
        }
    }
    model
}
