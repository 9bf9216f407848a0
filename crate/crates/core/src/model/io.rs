use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArchModel, ModelError};
use crate::SCHEMA_VERSION;

/// On-disk form of a model: the model itself plus versioning metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pa_hash: Option<String>,
    #[serde(flatten)]
    pub model: ArchModel,
}

impl ModelDocument {
    pub fn new(model: ArchModel, pa_hash: Option<String>) -> Self {
        ModelDocument { schema_version: SCHEMA_VERSION, pa_hash, model }
    }
}

pub fn model_to_json(doc: &ModelDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("models always serialise");
    s.push('\n');
    s
}

pub fn model_from_json(text: &str) -> Result<ModelDocument, ModelError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value.get("schemaVersion").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(ModelError::SchemaVersion { found, expected: SCHEMA_VERSION });
    }
    let doc: ModelDocument = serde_json::from_value(value)?;
    doc.model.validate()?;
    Ok(doc)
}

pub fn save_model(doc: &ModelDocument, path: impl AsRef<Path>) -> Result<(), ModelError> {
    fs::write(path, model_to_json(doc))?;
    Ok(())
}

pub fn load_model_document(path: impl AsRef<Path>) -> Result<ModelDocument, ModelError> {
    model_from_json(&fs::read_to_string(path)?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ArchModel, ModelError> {
    load_model_document(path).map(|d| d.model)
}
