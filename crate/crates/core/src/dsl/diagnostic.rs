use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    // syntax
    UnexpectedToken,
    UnknownKeyword,
    UnterminatedBlock,
    InvalidNesting,
    MissingSubsystem,
    // semantic
    DuplicateIdentifier,
    KindMismatch,
    SelfDependency,
    DuplicateRule,
    UndeclaredIdentifier,
    ForbiddenKindPair,
    ContradictoryRules,
    DomainRuleConflict,
    UnsatisfiedLoopRule,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::UnexpectedToken => "UNEXPECTED_TOKEN",
            DiagnosticCode::UnknownKeyword => "UNKNOWN_KEYWORD",
            DiagnosticCode::UnterminatedBlock => "UNTERMINATED_BLOCK",
            DiagnosticCode::InvalidNesting => "INVALID_NESTING",
            DiagnosticCode::MissingSubsystem => "MISSING_SUBSYSTEM",
            DiagnosticCode::DuplicateIdentifier => "DUPLICATE_IDENTIFIER",
            DiagnosticCode::KindMismatch => "KIND_MISMATCH",
            DiagnosticCode::SelfDependency => "SELF_DEPENDENCY",
            DiagnosticCode::DuplicateRule => "DUPLICATE_RULE",
            DiagnosticCode::UndeclaredIdentifier => "UNDECLARED_IDENTIFIER",
            DiagnosticCode::ForbiddenKindPair => "FORBIDDEN_KIND_PAIR",
            DiagnosticCode::ContradictoryRules => "CONTRADICTORY_RULES",
            DiagnosticCode::DomainRuleConflict => "DOMAIN_RULE_CONFLICT",
            DiagnosticCode::UnsatisfiedLoopRule => "UNSATISFIED_LOOP_RULE",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: DiagnosticCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, span, message: message.into() }
    }

    pub fn warning(code: DiagnosticCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, span, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}[{}]: {}", self.span, sev, self.code, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
