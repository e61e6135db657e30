//! Reading a registry from either definition source or an interchange document.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use vtt_core::dsl::{self, SourceError};
use vtt_core::interchange::{self, InterchangeError};
use vtt_core::Registry;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Source { path: PathBuf, source: Box<SourceError> },
    #[error("{}: {source}", path.display())]
    Interchange { path: PathBuf, source: Box<InterchangeError> },
}

/// Interchange documents are JSON objects; anything else is definition source.
pub fn is_interchange(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Strict load: overloaded glyphs and other registry errors are rejected.
pub fn load(path: &Path) -> Result<Registry, LoadError> {
    load_with(path, false)
}

/// Tolerates overloaded glyphs so the validator can report them.
pub fn load_lenient(path: &Path) -> Result<Registry, LoadError> {
    load_with(path, true)
}

fn load_with(path: &Path, lenient: bool) -> Result<Registry, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })?;
    if is_interchange(&text) {
        let r = if lenient { interchange::import_lenient(&text) } else { interchange::import(&text) };
        r.map_err(|source| LoadError::Interchange { path: path.into(), source: Box::new(source) })
    } else {
        let r = if lenient { dsl::compile_source_lenient(&text, None) } else { dsl::compile_source(&text, None) };
        r.map_err(|source| LoadError::Source { path: path.into(), source: Box::new(source) })
    }
}
