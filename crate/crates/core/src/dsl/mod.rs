//! The planned-architecture language: AST, parser, printer and validators.

mod ast;
mod diagnostic;
mod expand;
mod lexer;
mod parser;
mod print;
mod validate;

pub use ast::{CommRule, Declaration, Instance, PlannedArchitecture, RuleEndpoint, RuleOrigin, Span};
pub use diagnostic::{has_errors, Diagnostic, DiagnosticCode, Severity};
pub use expand::expand_loop_rules;
pub use parser::parse_pa;
pub use validate::validate_pa;
