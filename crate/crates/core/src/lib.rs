pub mod constraints;
pub mod diff;
pub mod dependency;
pub mod cli;
pub mod domain;
pub mod dsl;
pub mod kind;
pub mod model;
pub mod recovery;
pub mod render;

pub use dependency::DependencyKind;
pub use domain::{DomainRule, DomainRuleMatrix, Modality};
pub use kind::AbstractionKind;

/// Version stamped into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;
