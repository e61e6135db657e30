//! Versioned JSON interchange of a whole registry.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::*;
use crate::registry::{Registry, RegistryError};

pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: String,
    constraints: Vec<PropertyConstraint>,
    marks: Vec<Mark>,
    radicals: Vec<Radical>,
    rules: Vec<DerivationRule>,
    concepts: Vec<Concept>,
    bindings: Vec<Binding>,
}

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("not a JSON document: {0}")]
    Syntax(serde_json::Error),
    #[error("unsupported interchange version `{found}` (expected `{FORMAT_VERSION}`)")]
    Version { found: String },
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// Pretty-printed document; equal registries give identical text.
pub fn export(registry: &Registry) -> String {
    export_definitions(registry.definitions())
}

pub fn export_definitions(defs: &Definitions) -> String {
    let doc = Document {
        version: FORMAT_VERSION.into(),
        constraints: defs.constraints.clone(),
        marks: defs.marks.clone(),
        radicals: defs.radicals.clone(),
        rules: defs.rules.clone(),
        concepts: defs.concepts.clone(),
        bindings: defs.bindings.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("definitions serialize");
    s.push('\n');
    s
}

/// Reads the definitions of a document without building a registry.
pub fn import_definitions(text: &str) -> Result<Definitions, InterchangeError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(InterchangeError::Syntax)?;
    match value.get("version") {
        Some(serde_json::Value::String(v)) if v == FORMAT_VERSION => {}
        Some(serde_json::Value::String(v)) => return Err(InterchangeError::Version { found: v.clone() }),
        Some(other) => return Err(InterchangeError::Version { found: other.to_string() }),
        None => {
            return Err(InterchangeError::Schema { path: "version".into(), message: "missing field `version`".into() })
        }
    }
    let doc: Document = serde_path_to_error::deserialize(value).map_err(|e| InterchangeError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Ok(Definitions {
        constraints: doc.constraints,
        marks: doc.marks,
        radicals: doc.radicals,
        rules: doc.rules,
        concepts: doc.concepts,
        bindings: doc.bindings,
    })
}

pub fn import(text: &str) -> Result<Registry, InterchangeError> {
    Ok(Registry::new(import_definitions(text)?)?)
}

/// As [`import`], tolerating overloaded glyphs so they can be reported.
pub fn import_lenient(text: &str) -> Result<Registry, InterchangeError> {
    Ok(Registry::new_lenient(import_definitions(text)?)?)
}
