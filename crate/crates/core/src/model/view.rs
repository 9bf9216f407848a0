use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{ArchElement, ArchModel, ModelError};
use crate::kind::AbstractionKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Package {
    pub id: String,
    pub name: String,
    pub stereotype: AbstractionKind,
    #[serde(default)]
    pub children: Vec<Package>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PackageDependency {
    pub client: String,
    pub supplier: String,
}

impl PackageDependency {
    pub fn new(client: impl Into<String>, supplier: impl Into<String>) -> Self {
        PackageDependency { client: client.into(), supplier: supplier.into() }
    }
}

/// Package-diagram projection of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageView {
    pub name: String,
    pub packages: Vec<Package>,
    pub dependencies: Vec<PackageDependency>,
}

/// A package located in the view, with its parent id.
#[derive(Debug, Clone, Copy)]
pub struct PackageRef<'a> {
    pub package: &'a Package,
    pub parent: Option<&'a Package>,
    pub depth: usize,
}

impl PackageView {
    pub fn walk(&self) -> Vec<PackageRef<'_>> {
        fn visit<'a>(p: &'a Package, parent: Option<&'a Package>, depth: usize, out: &mut Vec<PackageRef<'a>>) {
            out.push(PackageRef { package: p, parent, depth });
            for c in &p.children {
                visit(c, Some(p), depth + 1, out);
            }
        }
        let mut out = Vec::new();
        for p in &self.packages {
            visit(p, None, 1, &mut out);
        }
        out
    }

    pub fn package_count(&self) -> usize {
        self.walk().len()
    }

    pub fn max_depth(&self) -> usize {
        self.walk().iter().map(|p| p.depth).max().unwrap_or(0)
    }

    pub fn find(&self, id: &str) -> Option<&Package> {
        self.walk().into_iter().map(|p| p.package).find(|p| p.id == id)
    }
}

fn package(e: &ArchElement) -> Package {
    Package {
        id: e.id.clone(),
        name: e.name.clone(),
        stereotype: e.stereotype,
        children: e.children.iter().map(package).collect(),
    }
}

/// One package per element, one dependency per relation.
pub fn to_package_view(model: &ArchModel) -> Result<PackageView, ModelError> {
    let ids: HashSet<&str> = model.elements().iter().map(|l| l.element.id.as_str()).collect();
    let mut dependencies = Vec::with_capacity(model.relations.len());
    for r in &model.relations {
        for end in [&r.from, &r.to] {
            if !ids.contains(end.as_str()) {
                return Err(ModelError::DanglingEndpoint { from: r.from.clone(), to: r.to.clone(), missing: end.clone() });
            }
        }
        dependencies.push(PackageDependency::new(r.from.clone(), r.to.clone()));
    }
    Ok(PackageView { name: model.name.clone(), packages: model.roots.iter().map(package).collect(), dependencies })
}
