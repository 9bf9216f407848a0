mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use remedy_core::diff::{diff_from_json, diff_to_json, diff_views, match_elements, DiffOptions, DiffResult};
use remedy_core::model::{load_model, pa_to_model, to_package_view, Package, PackageDependency, PackageView};
use remedy_core::AbstractionKind;

use common::*;

fn ids(view: &PackageView) -> Vec<String> {
    view.walk().iter().map(|r| r.package.id.clone()).collect()
}

/// Removes one package, lifting its children into its parent, and every
/// dependency touching it.
fn delete(view: &PackageView, victim: &str) -> PackageView {
    fn strip(list: &mut Vec<Package>, victim: &str) -> bool {
        if let Some(i) = list.iter().position(|p| p.id == victim) {
            let removed = list.remove(i);
            list.extend(removed.children);
            return true;
        }
        list.iter_mut().any(|p| strip(&mut p.children, victim))
    }
    let mut v = view.clone();
    assert!(strip(&mut v.packages, victim));
    v.dependencies.retain(|d| d.client != victim && d.supplier != victim);
    v
}

fn rename(view: &PackageView, from: &str, to: &str) -> PackageView {
    fn walk(list: &mut [Package], from: &str, to: &str) {
        for p in list {
            if p.id == from {
                p.id = to.to_string();
                p.name = to.to_string();
            }
            walk(&mut p.children, from, to);
        }
    }
    let mut v = view.clone();
    walk(&mut v.packages, from, to);
    for d in &mut v.dependencies {
        if d.client == from {
            d.client = to.to_string();
        }
        if d.supplier == from {
            d.supplier = to.to_string();
        }
    }
    v
}

fn robot_views() -> (PackageView, PackageView) {
    let pa = to_package_view(&pa_to_model(&robot())).unwrap();
    let ca = to_package_view(&load_model(fixture("robot/golden/ca.json")).unwrap()).unwrap();
    (pa, ca)
}

#[test]
fn robot_sixteen_missing() {
    let (pa, ca) = robot_views();
    let d = diff_views(&pa, &ca, &DiffOptions::default());
    assert_eq!(d.missing_elements, ROBOT_MISSING.to_vec());
    assert!(d.extra_elements.is_empty());
    assert_eq!(d.matched_pairs.len(), 9);

    let loops: Vec<_> = d
        .missing_dependencies
        .iter()
        .filter(|m| m.client == "masterLoop" && m.supplier == "slaveLoop")
        .collect();
    assert_eq!(loops.len(), 1);
    assert!(loops[0].client_missing && loops[0].supplier_missing);

    // oracle: planned dependencies whose pair is absent from the current view
    let ca_deps: BTreeSet<_> = ca.dependencies.iter().map(|d| (d.client.clone(), d.supplier.clone())).collect();
    let expected: BTreeSet<_> = pa
        .dependencies
        .iter()
        .map(|d| (d.client.clone(), d.supplier.clone()))
        .filter(|p| !ca_deps.contains(p))
        .collect();
    let got: BTreeSet<_> = d.missing_dependencies.iter().map(|m| (m.client.clone(), m.supplier.clone())).collect();
    assert_eq!(got, expected);
}

#[test]
fn renamed_monitor_matches_by_position() {
    let (pa, _) = robot_views();
    let ca = rename(&pa, "slaveMonitor", "MonitorImpl");
    let pairs = match_elements(&pa, &ca);
    let p = pairs.iter().find(|p| p.pa == "slaveMonitor").unwrap();
    assert_eq!(p.ca, "MonitorImpl");
    assert!(p.renamed && !p.moved);
}

#[test]
fn renamed_supplier_is_refactored() {
    let (pa, _) = robot_views();
    let base = diff_views(&pa, &pa, &DiffOptions::default());
    let renamed = diff_views(&pa, &rename(&pa, "slaveAnalyzer", "AnalyzerImpl"), &DiffOptions::default());
    assert_eq!(renamed.missing_dependencies, base.missing_dependencies);
    assert_eq!(renamed.missing_elements, base.missing_elements);
    assert!(renamed.refactored_dependencies.iter().any(|r| r.new.supplier == "AnalyzerImpl" || r.new.client == "AnalyzerImpl"));
    assert!(renamed.refactored_dependencies.iter().all(|r| r.old.client == "slaveAnalyzer" || r.old.supplier == "slaveAnalyzer"));
}

#[test]
fn ignore_patterns_drop_subtrees() {
    let (pa, ca) = robot_views();
    let opts = DiffOptions::with_ignore(&["*Loop", "loopManager"]).unwrap();
    let d = diff_views(&pa, &ca, &opts);
    assert!(d.missing_elements.iter().all(|m| !m.ends_with("Loop") && m != "loopManager"));
    assert!(d.missing_elements.len() < 16);
    assert!(DiffOptions::with_ignore(&["[unclosed"]).is_err());
}

#[test]
fn json_round_trip() {
    let (pa, ca) = robot_views();
    let d = diff_views(&pa, &ca, &DiffOptions::default());
    let text = diff_to_json(&d);
    assert_eq!(diff_from_json(&text).unwrap(), d);
    assert!(text.contains("\"missingElements\""));
    assert!(diff_from_json(&text.replace("\"schemaVersion\": 1", "\"schemaVersion\": 7")).is_err());
}

fn assert_partition(pa: &PackageView, ca: &PackageView, d: &DiffResult) {
    let matched_pa: BTreeSet<_> = d.matched_pairs.iter().map(|m| m.pa.clone()).collect();
    let matched_ca: BTreeSet<_> = d.matched_pairs.iter().map(|m| m.ca.clone()).collect();
    assert_eq!(matched_pa.len(), d.matched_pairs.len());
    assert_eq!(matched_ca.len(), d.matched_pairs.len());
    for id in ids(pa) {
        assert!(matched_pa.contains(&id) != d.missing_elements.contains(&id), "{id}");
    }
    for id in ids(ca) {
        assert!(matched_ca.contains(&id) != d.extra_elements.contains(&id), "{id}");
    }
    let missing: BTreeSet<_> = d.missing_dependencies.iter().map(|m| (m.client.clone(), m.supplier.clone())).collect();
    for r in &d.refactored_dependencies {
        assert!(!missing.contains(&(r.old.client.clone(), r.old.supplier.clone())));
    }
}

/// Deletes, renames and adds packages and dependencies at random.
fn perturb(view: &PackageView, rng: &mut ChaCha8Rng) -> PackageView {
    let mut v = view.clone();
    let all = ids(&v);
    let k = rng.gen_range(0..=2);
    for id in all.choose_multiple(rng, k) {
        v = delete(&v, id);
    }
    let left = ids(&v);
    let k = rng.gen_range(0..=2);
    for id in left.choose_multiple(rng, k) {
        v = rename(&v, id, &format!("{id}_impl"));
    }
    for i in 0..rng.gen_range(0..=2) {
        let p = Package { id: format!("extra{i}"), name: format!("extra{i}"), stereotype: AbstractionKind::GenericComponent, children: vec![] };
        v.packages.push(p);
    }
    v.dependencies.retain(|_| rng.gen_bool(0.8));
    let now = ids(&v);
    for _ in 0..rng.gen_range(0..=3) {
        let (a, b) = (now.choose(rng).unwrap(), now.choose(rng).unwrap());
        if a != b {
            v.dependencies.push(PackageDependency::new(a, b));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diff_with_itself_is_empty(seed in any::<u64>()) {
        let v = random_view(&mut rng(seed));
        let d = diff_views(&v, &v, &DiffOptions::default());
        prop_assert!(d.is_empty());
        prop_assert!(d.refactored_dependencies.is_empty());
        prop_assert_eq!(d.matched_pairs.len(), v.package_count());
        prop_assert!(diff_views(&v, &permuted(&v), &DiffOptions::default()).is_empty());
    }

    #[test]
    fn single_deletion(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let v = random_view(&mut rng(seed));
        let all = ids(&v);
        let victim = &all[pick.index(all.len())];
        let d = diff_views(&v, &delete(&v, victim), &DiffOptions::default());
        prop_assert_eq!(&d.missing_elements, &vec![victim.clone()]);
        prop_assert!(d.extra_elements.is_empty());
        let incident: BTreeSet<_> = v
            .dependencies
            .iter()
            .filter(|x| &x.client == victim || &x.supplier == victim)
            .map(|x| (x.client.clone(), x.supplier.clone()))
            .collect();
        let got: BTreeSet<_> = d.missing_dependencies.iter().map(|m| (m.client.clone(), m.supplier.clone())).collect();
        prop_assert_eq!(got, incident);
    }

    #[test]
    fn renamed_endpoint_is_refactored_never_missing(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let v = random_view(&mut rng(seed));
        prop_assume!(!v.dependencies.is_empty());
        let dep = &v.dependencies[pick.index(v.dependencies.len())];
        let target = dep.supplier.clone();
        let d = diff_views(&v, &rename(&v, &target, "renamedTarget"), &DiffOptions::default());
        prop_assert!(d.missing_dependencies.is_empty());
        prop_assert!(d.missing_elements.is_empty() && d.extra_elements.is_empty());
        let old: BTreeSet<_> = d.refactored_dependencies.iter().map(|r| r.old.clone()).collect();
        prop_assert!(old.contains(dep));
        for r in &d.refactored_dependencies {
            prop_assert!(r.old.client == target || r.old.supplier == target);
        }
    }

    #[test]
    fn agrees_with_set_difference(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let pa = random_view(&mut rng);
        prop_assume!(pa.package_count() <= 20);
        let ca = perturb(&pa, &mut rng);
        let d = diff_views(&pa, &ca, &DiffOptions::default());
        assert_partition(&pa, &ca, &d);

        let key = |v: &PackageView| -> BTreeSet<(AbstractionKind, String)> {
            v.walk().iter().map(|r| (r.package.stereotype, r.package.name.clone())).collect()
        };
        let (pk, ck) = (key(&pa), key(&ca));
        let renamed: Vec<_> = d.matched_pairs.iter().filter(|m| m.renamed).collect();
        let mut missing: BTreeSet<String> = pk.difference(&ck).map(|k| k.1.clone()).collect();
        let mut extra: BTreeSet<String> = ck.difference(&pk).map(|k| k.1.clone()).collect();
        for m in &renamed {
            missing.remove(&m.pa);
            extra.remove(&m.ca);
        }
        prop_assert_eq!(d.missing_elements.iter().cloned().collect::<BTreeSet<_>>(), missing);
        prop_assert_eq!(d.extra_elements.iter().cloned().collect::<BTreeSet<_>>(), extra);

        let ca_deps: BTreeSet<_> = ca.dependencies.iter().cloned().collect();
        let refactored_old: BTreeSet<_> = d.refactored_dependencies.iter().map(|r| r.old.clone()).collect();
        for r in &d.refactored_dependencies {
            prop_assert!(ca_deps.contains(&r.new));
        }
        let expected: BTreeSet<_> = pa
            .dependencies
            .iter()
            .filter(|x| !ca_deps.contains(*x) && !refactored_old.contains(*x))
            .map(|x| (x.client.clone(), x.supplier.clone()))
            .collect();
        let got: BTreeSet<_> = d.missing_dependencies.iter().map(|m| (m.client.clone(), m.supplier.clone())).collect();
        prop_assert_eq!(got, expected);
    }
}
