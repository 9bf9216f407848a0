use std::collections::{BTreeMap, HashSet};

use super::{Category, Constraint, ConstraintModality, ConstraintSet};
use crate::domain::{loop_domain_pairs, DomainRuleMatrix, Modality};
use crate::dsl::{expand_loop_rules, PlannedArchitecture};
use crate::kind::AbstractionKind;

struct Builder {
    used: HashSet<String>,
    out: Vec<Constraint>,
}

impl Builder {
    fn unique(&mut self, base: String) -> String {
        let mut id = base.clone();
        let mut n = 2;
        while !self.used.insert(id.clone()) {
            id = format!("{base}_{n}");
            n += 1;
        }
        id
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        base: String,
        category: Category,
        modality: ConstraintModality,
        subject: (&str, AbstractionKind),
        object: Option<(&str, AbstractionKind)>,
        container: Option<(&str, AbstractionKind)>,
    ) {
        let id = self.unique(base);
        self.out.push(Constraint {
            id,
            category,
            modality,
            subject: subject.0.to_string(),
            subject_kind: subject.1,
            object: object.map(|o| o.0.to_string()),
            object_kind: object.map(|o| o.1),
            container: container.map(|c| c.0.to_string()),
            container_kind: container.map(|c| c.1),
        });
    }
}

/// Builds existence, structural, communication and domain constraints.
/// Loop-level must-not-use rules are expanded first.
pub fn generate_constraints(pa: &PlannedArchitecture, matrix: &DomainRuleMatrix) -> ConstraintSet {
    let pa = expand_loop_rules(pa);
    let instances = pa.instances();
    let universe: BTreeMap<String, AbstractionKind> =
        instances.iter().map(|i| (i.decl.id.clone(), i.decl.kind)).collect();
    let mut b = Builder { used: HashSet::new(), out: Vec::new() };

    for i in &instances {
        let d = i.decl;
        b.push(format!("exist_{}", d.id), Category::Existence, ConstraintModality::Require, (&d.id, d.kind), None, None);
    }
    for i in &instances {
        if let Some(p) = i.parent {
            let d = i.decl;
            b.push(
                format!("composite_{}", d.id),
                Category::Structural,
                ConstraintModality::Require,
                (&d.id, d.kind),
                None,
                Some((&p.id, p.kind)),
            );
        }
    }
    for r in &pa.rules {
        let (s, t) = (&r.source.id, &r.target.id);
        let (Some(&sk), Some(&tk)) = (universe.get(s), universe.get(t)) else {
            continue;
        };
        if s == t {
            continue;
        }
        let (prefix, modality) = match r.modality {
            Modality::MustUse => ("access", ConstraintModality::Require),
            Modality::MustNotUse => ("not_access", ConstraintModality::Forbid),
        };
        b.push(format!("{prefix}_{s}_{t}"), Category::Communication, modality, (s, sk), Some((t, tk)), None);
    }
    for pair in loop_domain_pairs(&pa, matrix) {
        let (prefix, modality) = match pair.rule.modality {
            Modality::MustUse => ("domain_access", ConstraintModality::Require),
            Modality::MustNotUse => ("domain_not_access", ConstraintModality::Forbid),
        };
        b.push(
            format!("{prefix}_{}_{}", pair.source, pair.target),
            Category::Domain,
            modality,
            (pair.source, pair.rule.source),
            Some((pair.target, pair.rule.target)),
            None,
        );
    }
    ConstraintSet { pa_name: pa.name.clone(), universe, constraints: b.out }
}
