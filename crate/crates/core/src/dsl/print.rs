use std::fmt::{self, Write};

use super::ast::{CommRule, Declaration, PlannedArchitecture, RuleEndpoint};

fn write_decl(out: &mut String, d: &Declaration, depth: usize) -> fmt::Result {
    let indent = "    ".repeat(depth);
    write!(out, "{indent}{} {}", d.kind.keyword(), d.id)?;
    if d.domain_rules {
        out.push_str(" withDomainRules");
    }
    if d.kind.is_composable() {
        if d.children.is_empty() {
            out.push_str(" {}\n");
        } else {
            out.push_str(" {\n");
            for c in &d.children {
                write_decl(out, c, depth + 1)?;
            }
            writeln!(out, "{indent}}}")?;
        }
    } else {
        out.push_str(";\n");
    }
    Ok(())
}

fn endpoint(ep: &RuleEndpoint) -> String {
    match ep.selector {
        Some(k) => format!("{} {}", k.selector(), ep.id),
        None => ep.id.clone(),
    }
}

impl fmt::Display for CommRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {};", endpoint(&self.source), self.modality.as_str(), endpoint(&self.target))
    }
}

impl fmt::Display for PlannedArchitecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "Architecture {} {{", self.name)?;
        for s in self.subsystems() {
            write_decl(&mut out, s, 1)?;
        }
        out.push_str("}\nRules {\n");
        for r in &self.rules {
            writeln!(out, "    {r}")?;
        }
        out.push_str("}\n");
        f.write_str(&out)
    }
}
