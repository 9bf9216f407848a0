//! Package-diagram text in PlantUML notation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use thiserror::Error;

use crate::constraints::{Category, ConformanceReport};
use crate::diff::DiffResult;
use crate::model::{Package, PackageView};

pub const GRAY: &str = "#D3D3D3";
pub const BLUE: &str = "#3498DB";
pub const BLACK_ARROW: &str = ".[#black].>";
pub const RED_ARROW: &str = ".[#red].>";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("diff and report were produced from different planned architectures ({diff} vs {report})")]
    HashMismatch { diff: String, report: String },
    #[error("{source_name} refers to `{id}`, which the planned architecture does not declare")]
    UnknownElement { source_name: &'static str, id: String },
}

const LEGEND: &str = "\
legend right
  gray fill: planned abstraction not found in the code
  blue fill: abstraction present in the code
  white fill: grouping abstraction present in the code
  black arrow: planned communication found in the code
  red arrow: communication drift
endlegend
";

fn quote(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('"', "'"))
    }
}

fn sorted(packages: &[Package]) -> Vec<&Package> {
    let mut v: Vec<&Package> = packages.iter().collect();
    v.sort_by(|a, b| (&a.name, &a.id).cmp(&(&b.name, &b.id)));
    v
}

fn packages(out: &mut String, list: &[Package], depth: usize, fill: &dyn Fn(&Package) -> Option<&'static str>) {
    for p in sorted(list) {
        let indent = "  ".repeat(depth);
        let colour = fill(p).map(|c| format!(" {c}")).unwrap_or_default();
        let head = format!("{indent}package \"{}\" <<{}>>{colour}", p.name.replace('"', "'"), p.stereotype.keyword());
        if p.children.is_empty() {
            let _ = writeln!(out, "{head} {{}}");
        } else {
            let _ = writeln!(out, "{head} {{");
            packages(out, &p.children, depth + 1, fill);
            let _ = writeln!(out, "{indent}}}");
        }
    }
}

fn names(view: &PackageView) -> HashMap<&str, &str> {
    view.walk().into_iter().map(|r| (r.package.id.as_str(), r.package.name.as_str())).collect()
}

/// Plain diagram: nested packages and one dashed arrow per dependency.
pub fn render_view(view: &PackageView) -> String {
    let mut out = String::from("@startuml\n");
    packages(&mut out, &view.packages, 0, &|_| None);
    let names = names(view);
    let arrows: BTreeSet<(&str, &str)> = view
        .dependencies
        .iter()
        .filter_map(|d| Some((*names.get(d.client.as_str())?, *names.get(d.supplier.as_str())?)))
        .collect();
    for (a, b) in arrows {
        let _ = writeln!(out, "{} ..> {}", quote(a), quote(b));
    }
    out.push_str("@enduml\n");
    out
}

/// Planned view annotated with drift: missing elements in gray, present
/// leaves in blue, violated communication in red and satisfied must-use
/// rules in black.
pub fn render_conformance(pa: &PackageView, diff: &DiffResult, report: &ConformanceReport) -> Result<String, RenderError> {
    if let (Some(d), Some(r)) = (&diff.pa_hash, &report.pa_hash) {
        if d != r {
            return Err(RenderError::HashMismatch { diff: d.clone(), report: r.clone() });
        }
    }
    let names = names(pa);
    let missing: BTreeSet<&str> = diff.missing_elements.iter().map(String::as_str).collect();
    for id in &missing {
        if !names.contains_key(id) {
            return Err(RenderError::UnknownElement { source_name: "diff", id: id.to_string() });
        }
    }

    let mut arrows: BTreeMap<(&str, &str), bool> = BTreeMap::new();
    for f in &report.findings {
        if !matches!(f.category, Category::Communication | Category::Domain) {
            continue;
        }
        let Some(object) = &f.object else { continue };
        let name = |id: &str| {
            names.get(id).copied().ok_or_else(|| RenderError::UnknownElement { source_name: "report", id: id.to_string() })
        };
        let key = (name(&f.subject)?, name(object)?);
        if f.is_violation() {
            arrows.insert(key, true);
        } else if f.is_require() {
            arrows.entry(key).or_insert(false);
        }
    }

    let mut out = String::from("@startuml\n");
    packages(&mut out, &pa.packages, 0, &|p| {
        if missing.contains(p.id.as_str()) {
            Some(GRAY)
        } else if !p.stereotype.is_composable() {
            Some(BLUE)
        } else {
            None
        }
    });
    for ((a, b), red) in arrows {
        let arrow = if red { RED_ARROW } else { BLACK_ARROW };
        let _ = writeln!(out, "{} {arrow} {}", quote(a), quote(b));
    }
    out.push_str(LEGEND);
    out.push_str("@enduml\n");
    Ok(out)
}
