mod common;

use std::collections::{BTreeSet, HashMap};

use remedy_core::model::ArchModel;
use remedy_core::recovery::{
    build_ca, facts_to_json, lift_indirect, load_facts, load_mappings, mappings_from_json, scan_sources, CodeFacts,
    MappingSet, RecoveryError, ScanOptions,
};
use remedy_core::AbstractionKind;

use common::*;

fn robot_inputs() -> (CodeFacts, MappingSet) {
    let pa = robot();
    let facts = load_facts(fixture("robot/facts.json")).unwrap();
    let mappings = load_mappings(fixture("robot/mappings.json"), &facts, &pa).unwrap();
    (facts, mappings)
}

#[test]
fn scanning_robot_sources_reproduces_facts_file() {
    let out = scan_sources(&fixture("robot/src"), &ScanOptions::default());
    assert_eq!(facts_to_json(&out.facts), read_fixture("robot/facts.json"));
    let again = scan_sources(&fixture("robot/src"), &ScanOptions::default());
    assert_eq!(facts_to_json(&again.facts), facts_to_json(&out.facts));
    assert_eq!(again.log, out.log);
}

#[test]
fn robot_current_architecture_structure() {
    let pa = robot();
    let (facts, mappings) = robot_inputs();
    let built = build_ca(&facts, &mappings, &pa);
    assert!(built.warnings.is_empty(), "{:?}", built.warnings);
    let ca = &built.model;
    let distinct: BTreeSet<&str> = mappings.mappings.iter().map(|m| m.abstraction_id.as_str()).collect();
    assert_eq!(ca.element_count(), distinct.len());

    let manager = ca.find("adaptationManager").unwrap();
    let kids: BTreeSet<&str> = manager.children.iter().map(|c| c.id.as_str()).collect();
    for id in ["slaveMonitor", "slaveAnalyzer", "slavePlanner", "slaveExecutor", "knowledge"] {
        assert!(kids.contains(id), "{id}");
    }
    let knowledge = ca.find("knowledge").unwrap();
    assert_eq!(knowledge.stereotype, AbstractionKind::Knowledge);
    assert_eq!(knowledge.children[0].id, "proximityReference");
    assert_eq!(knowledge.children[0].stereotype, AbstractionKind::ReferenceInput);
    assert_eq!(ca.find("slaveMonitor").unwrap().implementations, ["br/ufscar/advanced/adaptation/SlaveMonitor"]);

    let drift = ca.relation("slavePlanner", "proximityReference").unwrap();
    assert!(!drift.indirect);
    assert!(drift.kinds.contains(&remedy_core::DependencyKind::ObjectCreation));
}

/// Every relation of a built model is witnessed by a code dependency
/// whose endpoints sit at or below the implementation paths.
fn assert_witnessed(ca: &ArchModel, facts: &CodeFacts) {
    let parents = facts.parents();
    let mut impls: HashMap<&str, &str> = HashMap::new();
    for l in ca.elements() {
        for p in &l.element.implementations {
            impls.insert(p.as_str(), l.element.id.as_str());
        }
    }
    let owner = |path: &str| -> Option<String> {
        let mut path = path.to_string();
        loop {
            if let Some(a) = impls.get(path.as_str()) {
                return Some(a.to_string());
            }
            path = parents.get(path.as_str()).copied().flatten()?.to_string();
        }
    };
    for r in ca.relations.iter().filter(|r| !r.indirect) {
        let witnessed = facts.dependencies.iter().any(|d| {
            owner(&d.from).as_ref() == Some(&r.from) && owner(&d.to).as_ref() == Some(&r.to) && r.kinds.contains(&d.kind)
        });
        assert!(witnessed, "{} -> {}", r.from, r.to);
    }
}

#[test]
fn robot_relations_are_witnessed() {
    let (facts, mappings) = robot_inputs();
    assert_witnessed(&build_ca(&facts, &mappings, &robot()).model, &facts);
}

#[test]
fn variable_level_mapping_resolves() {
    let pa = robot();
    let facts = load_facts(fixture("robot/facts.json")).unwrap();
    let text = r#"{"schemaVersion": 1, "mappings": [
        {"codePath": "br/ufscar/advanced/robot", "abstractionId": "environmentGuardRobot"},
        {"codePath": "br/ufscar/advanced/robot/BluetoothAdapter", "abstractionId": "proximity"},
        {"codePath": "br/ufscar/advanced/robot/BluetoothAdapter/getScanMode/min", "abstractionId": "proximityReference"}
    ]}"#;
    let set = mappings_from_json(text).unwrap();
    assert_eq!(set.len(), 3);
    set.resolve(&facts, &pa).unwrap();
}

#[test]
fn mapping_errors() {
    let pa = robot();
    let facts = load_facts(fixture("robot/facts.json")).unwrap();
    let empty = mappings_from_json(r#"{"schemaVersion": 1, "mappings": []}"#).unwrap();
    assert!(empty.is_empty());
    empty.resolve(&facts, &pa).unwrap();
    assert!(build_ca(&facts, &empty, &pa).model.roots.is_empty());

    let ghost = mappings_from_json(
        r#"{"schemaVersion": 1, "mappings": [{"codePath": "br/ufscar/advanced/robot", "abstractionId": "ghost"}]}"#,
    )
    .unwrap();
    let err = ghost.resolve(&facts, &pa).unwrap_err();
    assert!(matches!(&err, RecoveryError::UnknownAbstraction(id) if id == "ghost"));
    assert!(err.to_string().contains("ghost"));
}

#[test]
fn zero_dependencies_give_zero_relations() {
    let pa = robot();
    let (mut facts, mappings) = robot_inputs();
    facts.dependencies.clear();
    let ca = build_ca(&facts, &mappings, &pa).model;
    assert_eq!(ca.element_count(), 9);
    assert!(ca.relations.is_empty());
}

fn lifted(g: &CodeGraph) -> (ArchModel, BTreeSet<(String, String, bool)>) {
    let built = build_ca(&g.facts, &g.mappings, &g.pa).model;
    let ca = lift_indirect(&built, &g.facts, &g.mappings);
    let rels = ca.relations.iter().map(|r| (r.from.clone(), r.to.clone(), r.indirect)).collect();
    (ca, rels)
}

#[test]
fn lift_matches_reachability_oracle() {
    for seed in 0..50 {
        let g = random_code_graph(&mut rng(seed), 30);
        let (ca, got) = lifted(&g);
        assert_eq!(got, reachability_oracle(&g), "seed {seed}");
        assert_witnessed(&ca, &g.facts);
    }
}

#[test]
fn lift_is_a_fixpoint() {
    for seed in 100..120 {
        let g = random_code_graph(&mut rng(seed), 20);
        let (ca, _) = lifted(&g);
        assert_eq!(lift_indirect(&ca, &g.facts, &g.mappings), ca);
    }
}

#[test]
fn lift_needs_unmapped_intermediaries() {
    let pa = remedy_core::dsl::parse_pa(
        "Architecture G { Managing m {} Managed d { Sensor a; Sensor b; Sensor c; } } Rules {}",
    )
    .unwrap();
    let facts = remedy_core::recovery::facts_from_json(
        r#"{"schemaVersion": 1,
            "elements": [
              {"path": "p", "kind": "package"},
              {"path": "p/A", "kind": "class", "parent": "p"},
              {"path": "p/B", "kind": "class", "parent": "p"},
              {"path": "p/C", "kind": "class", "parent": "p"},
              {"path": "p/H", "kind": "class", "parent": "p"}],
            "dependencies": [
              {"from": "p/A", "to": "p/H", "kind": "method-call"},
              {"from": "p/H", "to": "p/B", "kind": "method-call"},
              {"from": "p/B", "to": "p/C", "kind": "method-call"}]}"#,
    )
    .unwrap();
    let mappings = mappings_from_json(
        r#"{"schemaVersion": 1, "mappings": [
            {"codePath": "p/A", "abstractionId": "a"},
            {"codePath": "p/B", "abstractionId": "b"},
            {"codePath": "p/C", "abstractionId": "c"}]}"#,
    )
    .unwrap();
    let ca = lift_indirect(&build_ca(&facts, &mappings, &pa).model, &facts, &mappings);
    let rels: BTreeSet<_> = ca.relations.iter().map(|r| (r.from.as_str(), r.to.as_str(), r.indirect)).collect();
    assert_eq!(rels, BTreeSet::from([("a", "b", true), ("b", "c", false)]));
}

#[test]
fn unreadable_file_is_logged_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("Good.java"), "package q;\npublic class Good { Missing m; }\n").unwrap();
    std::fs::write(dir.path().join("Bad.java"), [0xff, 0xfe, 0x00, 0x80]).unwrap();
    let out = scan_sources(dir.path(), &ScanOptions::default());
    assert!(out.facts.elements.iter().any(|e| e.path == "q/Good"));
    assert!(out.log.iter().any(|l| l.contains("Bad.java") && l.contains("skipped")), "{:?}", out.log);
    assert_eq!(out.log.iter().filter(|l| l.contains("`Missing`")).count(), 1, "{:?}", out.log);
}
