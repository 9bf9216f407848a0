//! Recovery of the current architecture from code facts and mappings.

mod build;
mod facts;
mod lift;
mod scan;

use thiserror::Error;

pub use build::{build_ca, Recovered};
pub use facts::{
    facts_from_json, facts_to_json, load_facts, load_mappings, mappings_from_json, mappings_to_json, CodeDependency,
    CodeElement, CodeFacts, CodeKind, Mapping, MappingSet,
};
pub use lift::lift_indirect;
pub use scan::{scan_sources, ScanOptions, ScanOutput};

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schemaVersion {0}")]
    SchemaVersion(u32),
    #[error("code path `{0}` is declared more than once")]
    DuplicatePath(String),
    #[error("`{path}` names unknown parent `{parent}`")]
    UnknownParent { path: String, parent: String },
    #[error("a {kind} (`{path}`) cannot be declared in {parent}")]
    BadContainment { path: String, kind: CodeKind, parent: String },
    #[error("containment cycle through `{0}`")]
    ContainmentCycle(String),
    #[error("dependency endpoint `{0}` is not a declared code element")]
    UnknownDependencyEndpoint(String),
    #[error("mapping targets unknown abstraction `{0}`")]
    UnknownAbstraction(String),
    #[error("mapping names code path `{0}`, which the facts do not contain")]
    UnknownCodePath(String),
    #[error("code path `{0}` is mapped more than once")]
    DuplicateMapping(String),
}
