//! Absence-loaded visual type theory: glyph model, meaning map, denotational
//! semantics over literal conjunctions, composition, the definition language,
//! validation and deterministic rendering.

pub mod compose;
pub mod composer;
pub mod dsl;
pub mod fixtures;
pub mod interchange;
pub mod model;
pub mod registry;
pub mod render;
pub mod seed;
pub mod semantics;
pub mod validate;

pub use compose::{compose, resolve_glyph, ComposeError, ComposeRequest, ComposeResponse, ResolveError};
pub use composer::{canonical_id, canonical_text, canonicalize};
pub use model::*;
pub use registry::{GlyphError, Registry, RegistryError};
pub use semantics::{constraint_of, denote, enumerate_family, invert, refines, LiteralConjunction};
pub use validate::{validate, Finding, LintReport, Severity};
