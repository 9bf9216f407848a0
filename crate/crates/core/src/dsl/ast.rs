use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::Modality;
use crate::kind::AbstractionKind;

/// Source region, 1-based, end exclusive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub column: u32,
    pub end_line: u32,
    pub end_column: u32,
}

impl Span {
    pub fn point(line: u32, column: u32) -> Self {
        Span { line, column, end_line: line, end_column: column }
    }

    pub fn to(self, other: Span) -> Span {
        Span { line: self.line, column: self.column, end_line: other.end_line, end_column: other.end_column }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// One declared abstraction instance and everything nested inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declaration {
    pub kind: AbstractionKind,
    pub id: String,
    /// The `withDomainRules` flag; only loops carry it.
    pub domain_rules: bool,
    pub children: Vec<Declaration>,
    pub span: Span,
}

impl Declaration {
    pub fn new(kind: AbstractionKind, id: impl Into<String>) -> Self {
        Declaration { kind, id: id.into(), domain_rules: false, children: Vec::new(), span: Span::default() }
    }

    pub fn with_children(mut self, children: Vec<Declaration>) -> Self {
        self.children = children;
        self
    }

    pub fn with_domain_rules(mut self) -> Self {
        self.domain_rules = true;
        self
    }

    /// Pre-order walk over this declaration and its descendants.
    pub fn walk(&self) -> Vec<&Declaration> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.children.iter().rev());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleOrigin {
    User,
    Domain,
    LoopExpansion,
}

/// One side of a rule: the optional kind selector as written plus the id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEndpoint {
    pub selector: Option<AbstractionKind>,
    pub id: String,
}

impl RuleEndpoint {
    pub fn new(selector: Option<AbstractionKind>, id: impl Into<String>) -> Self {
        RuleEndpoint { selector, id: id.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommRule {
    pub source: RuleEndpoint,
    pub modality: Modality,
    pub target: RuleEndpoint,
    pub origin: RuleOrigin,
    pub span: Span,
}

impl CommRule {
    pub fn new(source: RuleEndpoint, modality: Modality, target: RuleEndpoint) -> Self {
        CommRule { source, modality, target, origin: RuleOrigin::User, span: Span::default() }
    }
}

/// Parsed planned architecture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedArchitecture {
    pub name: String,
    pub managing: Vec<Declaration>,
    pub managed: Vec<Declaration>,
    pub rules: Vec<CommRule>,
    pub span: Span,
}

/// A declaration together with the id of its parent (None for subsystems).
#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    pub decl: &'a Declaration,
    pub parent: Option<&'a Declaration>,
    /// Innermost enclosing loop, or the declaration itself if it is a loop.
    pub enclosing_loop: Option<&'a Declaration>,
}

impl PlannedArchitecture {
    pub fn new(name: impl Into<String>) -> Self {
        PlannedArchitecture {
            name: name.into(),
            managing: Vec::new(),
            managed: Vec::new(),
            rules: Vec::new(),
            span: Span::default(),
        }
    }

    /// Managing subsystems followed by managed subsystems, in source order.
    pub fn subsystems(&self) -> impl Iterator<Item = &Declaration> {
        self.managing.iter().chain(self.managed.iter())
    }

    /// Every declared instance in pre-order.
    pub fn instances(&self) -> Vec<Instance<'_>> {
        fn visit<'a>(
            d: &'a Declaration,
            parent: Option<&'a Declaration>,
            lp: Option<&'a Declaration>,
            out: &mut Vec<Instance<'a>>,
        ) {
            let lp = if d.kind == AbstractionKind::Loop { Some(d) } else { lp };
            out.push(Instance { decl: d, parent, enclosing_loop: lp });
            for c in &d.children {
                visit(c, Some(d), lp, out);
            }
        }
        let mut out = Vec::new();
        for s in self.subsystems() {
            visit(s, None, None, &mut out);
        }
        out
    }

    pub fn instance(&self, id: &str) -> Option<Instance<'_>> {
        self.instances().into_iter().find(|i| i.decl.id == id)
    }

    pub fn kind_of(&self, id: &str) -> Option<AbstractionKind> {
        self.instance(id).map(|i| i.decl.kind)
    }

    pub fn loops(&self) -> Vec<&Declaration> {
        self.instances()
            .into_iter()
            .filter(|i| i.decl.kind == AbstractionKind::Loop)
            .map(|i| i.decl)
            .collect()
    }

    /// Ids of every declaration nested (at any depth) inside `loop_id`.
    pub fn loop_members(&self, loop_id: &str) -> Vec<&Declaration> {
        match self.instance(loop_id) {
            Some(i) => i.decl.walk().into_iter().skip(1).collect(),
            None => Vec::new(),
        }
    }

    /// Kind of a rule endpoint: the declared kind, else the selector.
    pub fn endpoint_kind(&self, ep: &RuleEndpoint) -> Option<AbstractionKind> {
        self.kind_of(&ep.id).or(ep.selector)
    }

    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Self {
        fn strip(d: &Declaration) -> Declaration {
            Declaration {
                kind: d.kind,
                id: d.id.clone(),
                domain_rules: d.domain_rules,
                children: d.children.iter().map(strip).collect(),
                span: Span::default(),
            }
        }
        PlannedArchitecture {
            name: self.name.clone(),
            managing: self.managing.iter().map(strip).collect(),
            managed: self.managed.iter().map(strip).collect(),
            rules: self.rules.iter().map(|r| CommRule { span: Span::default(), ..r.clone() }).collect(),
            span: Span::default(),
        }
    }
}
