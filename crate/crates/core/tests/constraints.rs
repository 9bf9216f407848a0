mod common;

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::Rng;
use remedy_core::constraints::{
    evaluate, generate_constraints, report_from_json, report_to_json, Category, CheckOptions, ConstraintModality,
    DriftClass, Status, Summary,
};
use remedy_core::dsl::expand_loop_rules;
use remedy_core::model::{pa_to_model_with_domain_rules, ArchElement, ArchModel, ArchRelation};
use remedy_core::recovery::{build_ca, lift_indirect};
use remedy_core::{DependencyKind, DomainRuleMatrix, Modality};

use common::*;

#[test]
fn matrix_totals() {
    let m = DomainRuleMatrix::all_active();
    assert_eq!(m.rules().len(), 20);
    assert_eq!(m.active_rules().filter(|r| r.modality == Modality::MustUse).count(), 7);
    assert_eq!(m.active_rules().filter(|r| r.modality == Modality::MustNotUse).count(), 13);
}

#[test]
fn robot_constraint_counts() {
    let pa = robot();
    let set = generate_constraints(&pa, &DomainRuleMatrix::all_active());
    let instances = pa.instances();
    let roots = pa.subsystems().count();
    assert_eq!(set.count(Category::Existence), instances.len());
    assert_eq!(set.count(Category::Structural), instances.len() - roots);
    assert_eq!(set.count(Category::Communication), expand_loop_rules(&pa).rules.len());
    // per loop: must-use and must-not-use domain pairs among its M/A/P/E/K members
    assert_eq!(set.count(Category::Domain), (3 + 9) + (7 + 13));
}

#[test]
fn robot_drift_findings() {
    let d = robot_drift(CheckOptions::default());
    let r = &d.report;
    let missing: BTreeSet<&str> =
        r.violations().filter(|f| f.category == Category::Existence).map(|f| f.subject.as_str()).collect();
    assert_eq!(missing, ROBOT_MISSING.iter().copied().collect());
    assert!(r
        .violations()
        .filter(|f| f.category == Category::Existence)
        .all(|f| f.drift_class == Some(DriftClass::MissingAbstraction)));

    // zero false positives among the realised elements
    let present: Vec<_> = d.ca.elements().iter().map(|l| l.element.id.clone()).collect();
    assert_eq!(present.len(), 9);
    for id in &present {
        assert!(!missing.contains(id.as_str()), "{id}");
    }

    let drift = r.findings.iter().find(|f| f.constraint_id == "implicit_deny_slavePlanner_proximityReference").unwrap();
    assert_eq!(drift.status, Status::Violation);
    assert_eq!(drift.drift_class, Some(DriftClass::UndeclaredInteraction));
    assert!(drift.detail.contains("object-creation"), "{}", drift.detail);
    let rel = d.ca.relation("slavePlanner", "proximityReference").unwrap();
    assert!(rel.kinds.contains(&DependencyKind::ObjectCreation));
    assert!(!r.is_conformant());
}

#[test]
fn implicit_deny_toggle() {
    let on = robot_drift(CheckOptions { implicit_deny: true }).report;
    let off = robot_drift(CheckOptions { implicit_deny: false }).report;
    let undeclared = |r: &remedy_core::constraints::ConformanceReport| {
        r.findings.iter().filter(|f| f.drift_class == Some(DriftClass::UndeclaredInteraction)).count()
    };
    assert!(undeclared(&on) >= 1);
    assert_eq!(undeclared(&off), 0);
    assert_eq!(on.findings.len() - off.findings.len(), undeclared(&on));
}

#[test]
fn report_summary_and_serialisation() {
    let r = robot_drift(CheckOptions::default()).report;
    assert_eq!(r.summary, Summary::tally(&r.findings));
    for f in &r.findings {
        assert_eq!(f.status == Status::Violation, f.drift_class.is_some(), "{}", f.constraint_id);
    }
    let sorted = r.findings.windows(2).all(|w| (w[0].category, &w[0].constraint_id) <= (w[1].category, &w[1].constraint_id));
    assert!(sorted);
    let text = report_to_json(&r);
    assert_eq!(report_to_json(&report_from_json(&text).unwrap()), text);
    assert!(text.contains("\"existence\""));
}

#[test]
fn empty_report() {
    let r = remedy_core::constraints::ConformanceReport::new("pa".into(), "ca".into(), vec![]);
    assert_eq!(r.summary, Summary::default());
    assert!(r.is_conformant());
}

fn drop_element(model: &ArchModel, victim: &str) -> ArchModel {
    fn strip(list: &mut Vec<ArchElement>, victim: &str) {
        if let Some(i) = list.iter().position(|e| e.id == victim) {
            let removed = list.remove(i);
            list.extend(removed.children);
            return;
        }
        for e in list.iter_mut() {
            strip(&mut e.children, victim);
        }
    }
    let mut m = model.clone();
    strip(&mut m.roots, victim);
    m.relations.retain(|r| r.from != victim && r.to != victim);
    m
}

fn violation_ids(r: &remedy_core::constraints::ConformanceReport) -> BTreeSet<String> {
    r.violations().map(|f| f.constraint_id.clone()).collect()
}

#[test]
fn existence_violations_grow_when_an_element_disappears() {
    let d = robot_drift(CheckOptions::default());
    let before: BTreeSet<String> =
        d.report.violations().filter(|f| f.category == Category::Existence).map(|f| f.constraint_id.clone()).collect();
    for l in d.ca.elements() {
        let ca = drop_element(&d.ca, &l.element.id);
        let after = evaluate(&d.set, &ca, CheckOptions::default()).unwrap();
        let now: BTreeSet<String> =
            after.violations().filter(|f| f.category == Category::Existence).map(|f| f.constraint_id.clone()).collect();
        assert!(now.is_superset(&before));
        assert_eq!(now.len(), before.len() + 1);
    }
}

/// Random relations between declared elements, with every element present.
fn random_relations(pa: &remedy_core::dsl::PlannedArchitecture, seed: u64) -> ArchModel {
    let mut rng = rng(seed);
    let mut model = pa_to_model_with_domain_rules(pa, &DomainRuleMatrix::all_active());
    let ids: Vec<String> = pa.instances().iter().map(|i| i.decl.id.clone()).collect();
    model.relations.clear();
    let p = rng.gen_range(0.02..0.2);
    for a in &ids {
        for b in &ids {
            if a != b && rng.gen_bool(p) {
                let mut r = ArchRelation::new(a, b);
                r.record(DependencyKind::MethodCall);
                r.indirect = rng.gen_bool(0.3);
                model.relations.push(r);
            }
        }
    }
    model
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn self_conformance_through_recovery(seed in any::<u64>()) {
        let pa = random_pa(&mut rng(seed), PaShape::MEDIUM);
        let matrix = DomainRuleMatrix::all_active();
        let set = generate_constraints(&pa, &matrix);

        let direct = evaluate(&set, &pa_to_model_with_domain_rules(&pa, &matrix), CheckOptions::default()).unwrap();
        prop_assert_eq!(direct.violation_count(), 0);

        let (facts, mappings) = self_conformant_code(&pa, &matrix);
        let built = build_ca(&facts, &mappings, &pa);
        prop_assert!(built.warnings.is_empty());
        let ca = lift_indirect(&built.model, &facts, &mappings);
        let report = evaluate(&set, &ca, CheckOptions::default()).unwrap();
        prop_assert_eq!(report.violation_count(), 0, "{:?}", report.violations().collect::<Vec<_>>());
    }

    #[test]
    fn deleting_from_a_conformant_model_adds_existence_violations(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let pa = random_pa(&mut rng(seed), PaShape::SMALL);
        let matrix = DomainRuleMatrix::all_active();
        let set = generate_constraints(&pa, &matrix);
        let ca = pa_to_model_with_domain_rules(&pa, &matrix);
        let ids: Vec<String> = ca.elements().iter().map(|l| l.element.id.clone()).collect();
        let victim = &ids[pick.index(ids.len())];
        let before = violation_ids(&evaluate(&set, &ca, CheckOptions::default()).unwrap());
        let after = evaluate(&set, &drop_element(&ca, victim), CheckOptions::default()).unwrap();
        prop_assert!(violation_ids(&after).is_superset(&before));
        prop_assert!(after.violations().any(|f| f.category == Category::Existence && &f.subject == victim));
    }

    #[test]
    fn forbid_require_duality(seed in any::<u64>(), deny in any::<bool>()) {
        let pa = random_pa(&mut rng(seed), PaShape::SMALL);
        let set = generate_constraints(&pa, &DomainRuleMatrix::all_active());
        let ca = random_relations(&pa, seed ^ 0x5eed);
        let present: HashSet<(String, String)> = ca.relations.iter().map(|r| (r.from.clone(), r.to.clone())).collect();

        let mut expected = BTreeSet::new();
        let mut covered = HashSet::new();
        for c in &set.constraints {
            let Some(o) = &c.object else { continue };
            let pair = (c.subject.clone(), o.clone());
            let hit = present.contains(&pair);
            if (c.modality == ConstraintModality::Require) != hit {
                expected.insert(c.id.clone());
            }
            covered.insert(pair);
        }
        if deny {
            for (a, b) in &present {
                if !covered.contains(&(a.clone(), b.clone())) {
                    expected.insert(format!("implicit_deny_{a}_{b}"));
                }
            }
        }
        let report = evaluate(&set, &ca, CheckOptions { implicit_deny: deny }).unwrap();
        prop_assert_eq!(violation_ids(&report), expected);
    }
}
