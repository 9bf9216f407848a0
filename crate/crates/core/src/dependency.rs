use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Code-level relationship types recognised between source elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependencyKind {
    MethodCall,
    ObjectCreation,
    FieldAccess,
    FieldType,
    VariableType,
    ParameterType,
    ReturnType,
    Extends,
    Implements,
    Import,
    Throws,
    Annotation,
    StaticReference,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 13] = [
        DependencyKind::MethodCall,
        DependencyKind::ObjectCreation,
        DependencyKind::FieldAccess,
        DependencyKind::FieldType,
        DependencyKind::VariableType,
        DependencyKind::ParameterType,
        DependencyKind::ReturnType,
        DependencyKind::Extends,
        DependencyKind::Implements,
        DependencyKind::Import,
        DependencyKind::Throws,
        DependencyKind::Annotation,
        DependencyKind::StaticReference,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::MethodCall => "method-call",
            DependencyKind::ObjectCreation => "object-creation",
            DependencyKind::FieldAccess => "field-access",
            DependencyKind::FieldType => "field-type",
            DependencyKind::VariableType => "variable-type",
            DependencyKind::ParameterType => "parameter-type",
            DependencyKind::ReturnType => "return-type",
            DependencyKind::Extends => "extends",
            DependencyKind::Implements => "implements",
            DependencyKind::Import => "import",
            DependencyKind::Throws => "throws",
            DependencyKind::Annotation => "annotation",
            DependencyKind::StaticReference => "static-reference",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DependencyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown dependency kind `{s}`"))
    }
}
