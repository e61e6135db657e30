//! The line-oriented definition language and the expression notation.
//!
//! ```text
//! constraint finite negatable "finite"
//! mark dot positive dot
//! radical set "set" family=structure strokes=[ stem:line(0.5,0.1,0.5,0.9) ] regions=[ card:finite@0.2,0.2:0.2x0.2 ]
//! bind set(card=dot) -> finite-set
//! expr "arrow(set | set)"
//! ```

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use parser::{parse, parse_expression, parse_glyph_literal};
pub use printer::{print, print_expression, print_glyph};

use crate::compose::{resolve_glyph_ref, ResolveError};
use crate::model::*;
use crate::registry::{EntityKind, GlyphError, Locus, Registry, RegistryError, RegistryErrorKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

/// A compilation failure, positioned when it stems from the compiled document.
#[derive(Clone, Debug, PartialEq)]
pub struct CompileError {
    pub pos: Option<Pos>,
    pub kind: CompileErrorKind,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CompileErrorKind {
    #[error(transparent)]
    Registry(RegistryError),
    #[error("expression references unknown glyph `{0}`")]
    UnresolvedGlyph(String),
    #[error("expression glyph is invalid: {0}")]
    InvalidGlyph(ResolveError),
}

impl fmt::Display for CompileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{p}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for CompileError {}

/// Either stage of turning source text into a registry.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum SourceError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Compile(#[from] CompileError),
}

/// Collects the declarations of `ast` after those of `base`.
pub fn definitions(ast: &SourceFile, base: Option<&Registry>) -> Definitions {
    let mut defs = base.map(|b| b.definitions().clone()).unwrap_or_default();
    for item in &ast.items {
        match &item.node {
            Item::Constraint(c) => defs.constraints.push(c.clone()),
            Item::Mark(m) => defs.marks.push(m.clone()),
            Item::Radical(r) => defs.radicals.push(r.clone()),
            Item::Rule(r) => defs.rules.push(r.clone()),
            Item::Concept(c) => defs.concepts.push(c.clone()),
            Item::Bind(b) => defs.bindings.push(b.clone()),
            Item::Expr(_) => {}
        }
    }
    defs
}

/// Builds a registry from `ast`, layered over an optional base registry, and
/// checks that every expression's glyph references resolve.
pub fn compile(ast: &SourceFile, base: Option<&Registry>) -> Result<Registry, CompileError> {
    compile_with(ast, base, Registry::new)
}

/// As [`compile`], but a glyph bound to several concepts is left for the
/// validator to report.
pub fn compile_lenient(ast: &SourceFile, base: Option<&Registry>) -> Result<Registry, CompileError> {
    compile_with(ast, base, Registry::new_lenient)
}

fn compile_with(
    ast: &SourceFile,
    base: Option<&Registry>,
    build: fn(Definitions) -> Result<Registry, RegistryError>,
) -> Result<Registry, CompileError> {
    let base_bindings = base.map_or(0, |b| b.bindings().len());
    let registry = build(definitions(ast, base)).map_err(|e| CompileError {
        pos: locate_registry_error(ast, &e, base_bindings),
        kind: CompileErrorKind::Registry(e),
    })?;
    for item in ast.expressions() {
        let Item::Expr(e) = &item.node else { continue };
        for r in e.glyph_refs() {
            if let Err(err) = resolve_glyph_ref(r, &registry) {
                let (word, kind) = match (r, err) {
                    (GlyphRef::Id(id), _) => (id.clone(), CompileErrorKind::UnresolvedGlyph(id.clone())),
                    (GlyphRef::Inline(g), err) => (g.radical.to_string(), CompileErrorKind::InvalidGlyph(err)),
                };
                return Err(CompileError { pos: Some(item.locate(&word)), kind });
            }
        }
    }
    Ok(registry)
}

/// Parses and compiles in one step.
pub fn compile_source(src: &str, base: Option<&Registry>) -> Result<Registry, SourceError> {
    Ok(compile(&parse(src)?, base)?)
}

pub fn compile_source_lenient(src: &str, base: Option<&Registry>) -> Result<Registry, SourceError> {
    Ok(compile_lenient(&parse(src)?, base)?)
}

fn locate_registry_error(ast: &SourceFile, err: &RegistryError, base_bindings: usize) -> Option<Pos> {
    let item = match &err.locus {
        Locus::Entity(kind, id) => ast.items.iter().rev().find(|i| item_declares(&i.node, *kind, id))?,
        Locus::Binding(n) => ast
            .items
            .iter()
            .filter(|i| matches!(i.node, Item::Bind(_)))
            .nth(n.checked_sub(base_bindings)?)?,
    };
    let word = match &err.kind {
        RegistryErrorKind::Dangling { id, .. } => Some(id.clone()),
        RegistryErrorKind::Glyph(g) => match g {
            GlyphError::UnknownRadical(r) => Some(r.to_string()),
            GlyphError::UnknownRegion { region, .. } => Some(region.clone()),
            GlyphError::UnknownMark(m) => Some(m.to_string()),
            GlyphError::UnknownRule(r) => Some(r.to_string()),
            _ => None,
        },
        RegistryErrorKind::DuplicateId(_) => match &err.locus {
            Locus::Entity(_, id) => Some(id.clone()),
            Locus::Binding(_) => None,
        },
        _ => None,
    };
    Some(word.map_or(item.pos, |w| item.locate(&w)))
}

fn item_declares(item: &Item, kind: EntityKind, id: &str) -> bool {
    match (item, kind) {
        (Item::Constraint(c), EntityKind::Constraint) => c.id.as_str() == id,
        (Item::Mark(m), EntityKind::Mark) => m.id.as_str() == id,
        (Item::Radical(r), EntityKind::Radical) => r.id.as_str() == id,
        (Item::Rule(r), EntityKind::Rule) => r.id.as_str() == id,
        (Item::Concept(c), EntityKind::Concept) => c.id.as_str() == id,
        _ => false,
    }
}

/// A document declaring everything in `defs`, in the order
/// constraints, marks, radicals, concepts, rules, bindings.
pub fn from_definitions(defs: &Definitions) -> SourceFile {
    let mut items = Vec::new();
    let mut push = |item: Item| items.push(Spanned::new(item, Pos::default()));
    defs.constraints.iter().for_each(|c| push(Item::Constraint(c.clone())));
    defs.marks.iter().for_each(|m| push(Item::Mark(m.clone())));
    defs.radicals.iter().for_each(|r| push(Item::Radical(r.clone())));
    defs.concepts.iter().for_each(|c| push(Item::Concept(c.clone())));
    defs.rules.iter().for_each(|r| push(Item::Rule(r.clone())));
    defs.bindings.iter().for_each(|b| push(Item::Bind(b.clone())));
    SourceFile { items }
}
