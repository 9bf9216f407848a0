//! Design-time checks over a parsed planned architecture.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::ast::{CommRule, PlannedArchitecture, RuleOrigin};
use super::diagnostic::{Diagnostic, DiagnosticCode};
use crate::domain::{DomainRuleMatrix, Modality};
use crate::kind::AbstractionKind;

/// Runs every validator. Errors block artifact generation, warnings do not.
pub fn validate_pa(pa: &PlannedArchitecture, config: &DomainRuleMatrix) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    duplicate_identifiers(pa, &mut out);
    for rule in &pa.rules {
        self_dependency(rule, &mut out);
        undeclared_and_kinds(pa, rule, &mut out);
    }
    duplicate_rules(pa, &mut out);
    contradictions(pa, &mut out);
    domain_conflicts(pa, config, &mut out);
    loop_rules(pa, &mut out);
    out.sort_by(|a, b| a.span.cmp(&b.span).then(a.code.cmp(&b.code)));
    out
}

fn duplicate_identifiers(pa: &PlannedArchitecture, out: &mut Vec<Diagnostic>) {
    let mut first_seen = HashMap::new();
    for inst in pa.instances() {
        let d = inst.decl;
        if let Some(prev) = first_seen.insert(d.id.as_str(), d.span) {
            out.push(Diagnostic::error(
                DiagnosticCode::DuplicateIdentifier,
                d.span,
                format!("identifier `{}` is already declared at {prev}", d.id),
            ));
            first_seen.insert(d.id.as_str(), prev);
        }
    }
}

fn self_dependency(rule: &CommRule, out: &mut Vec<Diagnostic>) {
    if rule.source.id == rule.target.id {
        out.push(Diagnostic::error(
            DiagnosticCode::SelfDependency,
            rule.span,
            format!("`{}` cannot have a rule targeting itself", rule.source.id),
        ));
    }
}

fn undeclared_and_kinds(pa: &PlannedArchitecture, rule: &CommRule, out: &mut Vec<Diagnostic>) {
    let mut missing = Vec::new();
    for ep in [&rule.source, &rule.target] {
        match pa.kind_of(&ep.id) {
            None => missing.push(ep.id.as_str()),
            Some(declared) => {
                if let Some(sel) = ep.selector.filter(|&s| s != declared) {
                    out.push(Diagnostic::error(
                        DiagnosticCode::KindMismatch,
                        rule.span,
                        format!("`{}` is declared as {declared} but referenced as `{}`", ep.id, sel.selector()),
                    ));
                }
            }
        }
    }
    if !missing.is_empty() {
        missing.dedup();
        let list = missing.iter().map(|m| format!("`{m}`")).collect::<Vec<_>>().join(", ");
        out.push(Diagnostic::error(
            DiagnosticCode::UndeclaredIdentifier,
            rule.span,
            format!("rule references undeclared identifier {list}"),
        ));
    }
    let (Some(src), Some(tgt)) = (pa.endpoint_kind(&rule.source), pa.endpoint_kind(&rule.target)) else {
        return;
    };
    if !src.may_use(tgt) {
        out.push(Diagnostic::error(
            DiagnosticCode::ForbiddenKindPair,
            rule.span,
            format!("a {src} cannot have communication rules towards a {tgt}"),
        ));
    }
}

fn duplicate_rules(pa: &PlannedArchitecture, out: &mut Vec<Diagnostic>) {
    let mut groups: BTreeMap<(&str, &str, Modality), Vec<&CommRule>> = BTreeMap::new();
    for r in &pa.rules {
        groups.entry((&r.source.id, &r.target.id, r.modality)).or_default().push(r);
    }
    for ((s, t, m), rules) in groups {
        if rules.len() > 1 {
            for r in rules {
                out.push(Diagnostic::error(
                    DiagnosticCode::DuplicateRule,
                    r.span,
                    format!("duplicated rule `{s} {} {t}`", m.as_str()),
                ));
            }
        }
    }
}

fn contradictions(pa: &PlannedArchitecture, out: &mut Vec<Diagnostic>) {
    let mut seen: BTreeMap<(&str, &str), [Option<&CommRule>; 2]> = BTreeMap::new();
    for r in &pa.rules {
        let slot = match r.modality {
            Modality::MustUse => 0,
            Modality::MustNotUse => 1,
        };
        let entry = seen.entry((&r.source.id, &r.target.id)).or_default();
        entry[slot].get_or_insert(r);
    }
    for ((s, t), pair) in seen {
        if let [Some(a), Some(b)] = pair {
            let later = if a.span > b.span { a } else { b };
            out.push(Diagnostic::error(
                DiagnosticCode::ContradictoryRules,
                later.span,
                format!("`{s}` is declared both must-use and must-not-use towards `{t}`"),
            ));
        }
    }
}

/// Warns about user rules that oppose an active domain rule between two
/// members of the same `withDomainRules` loop.
fn domain_conflicts(pa: &PlannedArchitecture, config: &DomainRuleMatrix, out: &mut Vec<Diagnostic>) {
    let instances: HashMap<_, _> = pa.instances().into_iter().map(|i| (i.decl.id.as_str(), i)).collect();
    for r in pa.rules.iter().filter(|r| r.origin == RuleOrigin::User) {
        let (Some(src), Some(tgt)) = (instances.get(r.source.id.as_str()), instances.get(r.target.id.as_str()))
        else {
            continue;
        };
        let (Some(ls), Some(lt)) = (src.enclosing_loop, tgt.enclosing_loop) else {
            continue;
        };
        if ls.id != lt.id || !ls.domain_rules {
            continue;
        }
        let Some(rule) = config.lookup(src.decl.kind, tgt.decl.kind) else {
            continue;
        };
        if rule.active && rule.modality == r.modality.opposite() {
            out.push(Diagnostic::warning(
                DiagnosticCode::DomainRuleConflict,
                r.span,
                format!(
                    "rule contradicts active domain rule #{} ({} {} {})",
                    rule.number,
                    rule.source,
                    rule.modality.as_str(),
                    rule.target
                ),
            ));
        }
    }
}

/// A loop-level must-use needs at least one member-level must-use rule
/// going from a member of the first loop to a member of the second.
fn loop_rules(pa: &PlannedArchitecture, out: &mut Vec<Diagnostic>) {
    let member_rules: HashSet<(&str, &str)> = pa
        .rules
        .iter()
        .filter(|r| r.modality == Modality::MustUse)
        .map(|r| (r.source.id.as_str(), r.target.id.as_str()))
        .collect();
    for r in &pa.rules {
        if r.modality != Modality::MustUse
            || pa.kind_of(&r.source.id) != Some(AbstractionKind::Loop)
            || pa.kind_of(&r.target.id) != Some(AbstractionKind::Loop)
            || r.source.id == r.target.id
        {
            continue;
        }
        let from = pa.loop_members(&r.source.id);
        let to = pa.loop_members(&r.target.id);
        let crossed = from
            .iter()
            .any(|a| to.iter().any(|b| member_rules.contains(&(a.id.as_str(), b.id.as_str()))));
        if !crossed {
            out.push(Diagnostic::error(
                DiagnosticCode::UnsatisfiedLoopRule,
                r.span,
                format!(
                    "loop `{}` must use loop `{}` but no member of the first has a must-use rule towards a member of the second",
                    r.source.id, r.target.id
                ),
            ));
        }
    }
}
