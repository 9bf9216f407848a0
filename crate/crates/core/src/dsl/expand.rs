use std::collections::HashSet;

use super::ast::{CommRule, PlannedArchitecture, RuleEndpoint, RuleOrigin};
use crate::domain::Modality;
use crate::kind::AbstractionKind;

/// Turns each `loop A must-not-use loop B` into member-level must-not-use
/// rules for every (member of A, member of B) pair that has no rule yet.
/// Loop-level rules themselves are kept.
pub fn expand_loop_rules(pa: &PlannedArchitecture) -> PlannedArchitecture {
    let mut out = pa.clone();
    let mut covered: HashSet<(String, String)> =
        pa.rules.iter().map(|r| (r.source.id.clone(), r.target.id.clone())).collect();

    for rule in &pa.rules {
        if rule.modality != Modality::MustNotUse
            || pa.kind_of(&rule.source.id) != Some(AbstractionKind::Loop)
            || pa.kind_of(&rule.target.id) != Some(AbstractionKind::Loop)
        {
            continue;
        }
        let from = pa.loop_members(&rule.source.id);
        let to = pa.loop_members(&rule.target.id);
        for a in &from {
            for b in &to {
                if a.id == b.id || !covered.insert((a.id.clone(), b.id.clone())) {
                    continue;
                }
                let mut expanded = CommRule::new(
                    RuleEndpoint::new(Some(a.kind), a.id.clone()),
                    Modality::MustNotUse,
                    RuleEndpoint::new(Some(b.kind), b.id.clone()),
                );
                expanded.origin = RuleOrigin::LoopExpansion;
                expanded.span = rule.span;
                out.rules.push(expanded);
            }
        }
    }
    out
}
