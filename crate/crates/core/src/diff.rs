//! Comparison of planned and current package views.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use glob::Pattern;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kind::AbstractionKind;
use crate::model::{Package, PackageDependency, PackageView};
use crate::SCHEMA_VERSION;

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("cannot read or write diff: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed diff: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schemaVersion {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("invalid ignore pattern `{pattern}`: {source}")]
    Pattern { pattern: String, source: glob::PatternError },
}

/// Filtering applied to both views before matching.
#[derive(Debug, Clone, Default)]
pub struct DiffOptions {
    ignore: Vec<Pattern>,
}

impl DiffOptions {
    /// Elements whose name matches any glob are dropped with their subtree.
    pub fn with_ignore<S: AsRef<str>>(patterns: &[S]) -> Result<Self, DiffError> {
        let ignore = patterns
            .iter()
            .map(|p| {
                Pattern::new(p.as_ref()).map_err(|source| DiffError::Pattern { pattern: p.as_ref().to_string(), source })
            })
            .collect::<Result<_, _>>()?;
        Ok(DiffOptions { ignore })
    }

    fn ignores(&self, name: &str) -> bool {
        self.ignore.iter().any(|p| p.matches(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchedPair {
    pub pa: String,
    pub ca: String,
    /// Paired positionally despite differing names.
    pub renamed: bool,
    /// Parents are not paired with each other.
    pub moved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MissingDependency {
    pub client: String,
    pub supplier: String,
    pub client_missing: bool,
    pub supplier_missing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefactoredDependency {
    pub old: PackageDependency,
    pub new: PackageDependency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffResult {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pa_hash: Option<String>,
    pub missing_elements: Vec<String>,
    pub extra_elements: Vec<String>,
    pub missing_dependencies: Vec<MissingDependency>,
    pub refactored_dependencies: Vec<RefactoredDependency>,
    pub matched_pairs: Vec<MatchedPair>,
}

impl DiffResult {
    /// True when nothing is missing, extra or refactored.
    pub fn is_empty(&self) -> bool {
        self.missing_elements.is_empty()
            && self.extra_elements.is_empty()
            && self.missing_dependencies.is_empty()
            && self.refactored_dependencies.is_empty()
    }
}

struct Node<'a> {
    pkg: &'a Package,
    parent: Option<&'a str>,
}

fn index(view: &PackageView) -> BTreeMap<&str, Node<'_>> {
    view.walk()
        .into_iter()
        .map(|r| (r.package.id.as_str(), Node { pkg: r.package, parent: r.parent.map(|p| p.id.as_str()) }))
        .collect()
}

/// Pairs planned elements with current ones, by stereotype and name first
/// and then by position under already paired parents.
pub fn match_elements(pa: &PackageView, ca: &PackageView) -> Vec<MatchedPair> {
    let pa_idx = index(pa);
    let ca_idx = index(ca);

    let mut by_key: BTreeMap<(AbstractionKind, &str), (Vec<&str>, Vec<&str>)> = BTreeMap::new();
    for (id, n) in &pa_idx {
        by_key.entry((n.pkg.stereotype, n.pkg.name.as_str())).or_default().0.push(id);
    }
    for (id, n) in &ca_idx {
        by_key.entry((n.pkg.stereotype, n.pkg.name.as_str())).or_default().1.push(id);
    }
    let mut fwd: BTreeMap<&str, &str> = BTreeMap::new();
    let mut back: HashMap<&str, &str> = HashMap::new();
    for (p, c) in by_key.values() {
        if let ([p], [c]) = (p.as_slice(), c.as_slice()) {
            fwd.insert(p, c);
            back.insert(c, p);
        }
    }

    let compatible = |p: &Node, c: &Node, fwd: &BTreeMap<&str, &str>| {
        p.pkg.stereotype == c.pkg.stereotype
            && match (p.parent, c.parent) {
                (None, None) => true,
                (Some(pp), Some(cp)) => fwd.get(pp) == Some(&cp),
                _ => false,
            }
    };
    loop {
        let mut found = Vec::new();
        for (pid, p) in pa_idx.iter().filter(|(id, _)| !fwd.contains_key(*id)) {
            let cands: Vec<&str> = ca_idx
                .iter()
                .filter(|(cid, c)| !back.contains_key(*cid) && compatible(p, c, &fwd))
                .map(|(cid, _)| *cid)
                .collect();
            let [cid] = cands.as_slice() else { continue };
            let c = &ca_idx[cid];
            let rivals = pa_idx.iter().filter(|(id, q)| !fwd.contains_key(*id) && compatible(q, c, &fwd)).count();
            if rivals == 1 {
                found.push((*pid, *cid));
            }
        }
        if found.is_empty() {
            break;
        }
        for (p, c) in found {
            fwd.insert(p, c);
            back.insert(c, p);
        }
    }

    fwd.iter()
        .map(|(p, c)| {
            let (pn, cn) = (&pa_idx[p], &ca_idx[c]);
            let moved = match (pn.parent, cn.parent) {
                (None, None) => false,
                (Some(pp), Some(cp)) => fwd.get(pp) != Some(&cp),
                _ => true,
            };
            MatchedPair { pa: p.to_string(), ca: c.to_string(), renamed: pn.pkg.name != cn.pkg.name, moved }
        })
        .collect()
}

fn filter_view(view: &PackageView, options: &DiffOptions) -> PackageView {
    fn keep(p: &Package, options: &DiffOptions) -> Option<Package> {
        if options.ignores(&p.name) {
            return None;
        }
        let mut out = p.clone();
        out.children = p.children.iter().filter_map(|c| keep(c, options)).collect();
        Some(out)
    }
    if options.ignore.is_empty() {
        return view.clone();
    }
    let mut out = view.clone();
    out.packages = view.packages.iter().filter_map(|p| keep(p, options)).collect();
    let ids: BTreeSet<String> = out.walk().iter().map(|r| r.package.id.clone()).collect();
    out.dependencies.retain(|d| ids.contains(&d.client) && ids.contains(&d.supplier));
    out
}

/// Classifies every difference between the planned and current views.
pub fn diff_views(pa: &PackageView, ca: &PackageView, options: &DiffOptions) -> DiffResult {
    let pa = filter_view(pa, options);
    let ca = filter_view(ca, options);
    let pairs = match_elements(&pa, &ca);
    let by_pa: HashMap<&str, &MatchedPair> = pairs.iter().map(|m| (m.pa.as_str(), m)).collect();
    let matched_ca: BTreeSet<&str> = pairs.iter().map(|m| m.ca.as_str()).collect();
    let ca_deps: BTreeSet<(&str, &str)> =
        ca.dependencies.iter().map(|d| (d.client.as_str(), d.supplier.as_str())).collect();

    let mut missing_dependencies = BTreeSet::new();
    let mut refactored_dependencies = BTreeSet::new();
    let pa_deps: BTreeSet<&PackageDependency> = pa.dependencies.iter().collect();
    for d in pa_deps {
        let (cl, su) = (by_pa.get(d.client.as_str()), by_pa.get(d.supplier.as_str()));
        match (cl, su) {
            (Some(cl), Some(su)) if ca_deps.contains(&(cl.ca.as_str(), su.ca.as_str())) => {
                if cl.renamed || cl.moved || su.renamed || su.moved {
                    refactored_dependencies.insert(RefactoredDependency {
                        old: d.clone(),
                        new: PackageDependency::new(cl.ca.clone(), su.ca.clone()),
                    });
                }
            }
            _ => {
                missing_dependencies.insert(MissingDependency {
                    client: d.client.clone(),
                    supplier: d.supplier.clone(),
                    client_missing: cl.is_none(),
                    supplier_missing: su.is_none(),
                });
            }
        }
    }

    let mut missing_elements: Vec<String> =
        pa.walk().iter().map(|r| &r.package.id).filter(|id| !by_pa.contains_key(id.as_str())).cloned().collect();
    missing_elements.sort();
    let mut extra_elements: Vec<String> =
        ca.walk().iter().map(|r| &r.package.id).filter(|id| !matched_ca.contains(id.as_str())).cloned().collect();
    extra_elements.sort();

    DiffResult {
        schema_version: SCHEMA_VERSION,
        pa_hash: None,
        missing_elements,
        extra_elements,
        missing_dependencies: missing_dependencies.into_iter().collect(),
        refactored_dependencies: refactored_dependencies.into_iter().collect(),
        matched_pairs: pairs,
    }
}

pub fn diff_to_json(diff: &DiffResult) -> String {
    let mut s = serde_json::to_string_pretty(diff).expect("diffs always serialise");
    s.push('\n');
    s
}

pub fn diff_from_json(text: &str) -> Result<DiffResult, DiffError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value.get("schemaVersion").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(DiffError::SchemaVersion { found, expected: SCHEMA_VERSION });
    }
    Ok(serde_json::from_value(value)?)
}

pub fn save_diff(diff: &DiffResult, path: impl AsRef<Path>) -> Result<(), DiffError> {
    fs::write(path, diff_to_json(diff))?;
    Ok(())
}

pub fn load_diff(path: impl AsRef<Path>) -> Result<DiffResult, DiffError> {
    diff_from_json(&fs::read_to_string(path)?)
}
