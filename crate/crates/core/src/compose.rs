//! Glyph resolution by id and the compose request shared by the CLI, the HTTP
//! service and the browser demo.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composer::{self, canonical_id, canonical_text};
use crate::dsl::{parse_glyph_literal, GlyphRef, ParseError};
use crate::model::*;
use crate::registry::{GlyphError, Registry};
use crate::render::{self, RenderError, DEFAULT_SIZE};
use crate::semantics::{constraint_of, lookup_concept};

/// Most assignment entries, rules or nested glyphs a compose request may carry.
pub const MAX_PAYLOAD_ITEMS: usize = 64;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ResolveError {
    #[error("no glyph, concept or radical with id `{0}`")]
    NotFound(String),
    #[error("concept `{0}` has no glyph")]
    Unbound(ConceptId),
    #[error("invalid glyph literal: {0}")]
    Parse(ParseError),
    #[error(transparent)]
    Invalid(#[from] GlyphError),
}

/// Resolves a glyph reference: a concept id (its precedence glyph, else its
/// first), a radical id (the bare glyph), a canonical glyph id of a bound or
/// bare glyph, or an inline glyph literal.
pub fn resolve_glyph(text: &str, registry: &Registry) -> Result<Glyph, ResolveError> {
    let text = text.trim();
    if is_valid_id(text) {
        if let Some(g) = concept_glyph(&ConceptId::new(text), registry)? {
            return Ok(g);
        }
        if registry.radical(&RadicalId::new(text)).is_some() {
            return Ok(Glyph::bare(text));
        }
        if let Some((_, g)) = known_glyphs(registry).into_iter().find(|(id, _)| id == text) {
            return Ok(g);
        }
        if !text.contains('(') {
            return Err(ResolveError::NotFound(text.to_owned()));
        }
    }
    let g = parse_glyph_literal(text).map_err(ResolveError::Parse)?;
    registry.validate_glyph(&g)?;
    Ok(g)
}

pub fn resolve_glyph_ref(r: &GlyphRef, registry: &Registry) -> Result<Glyph, ResolveError> {
    match r {
        GlyphRef::Id(id) => resolve_glyph(id, registry),
        GlyphRef::Inline(g) => {
            registry.validate_glyph(g)?;
            Ok(g.clone())
        }
    }
}

fn concept_glyph(id: &ConceptId, registry: &Registry) -> Result<Option<Glyph>, ResolveError> {
    if registry.concept(id).is_none() {
        return Ok(None);
    }
    let bound: Vec<&Binding> = registry.bindings().iter().filter(|b| &b.concept == id).collect();
    match bound.iter().find(|b| b.precedence).or_else(|| bound.first()) {
        Some(b) => Ok(Some(b.glyph.clone())),
        None if registry.radical(&RadicalId::new(id.as_str())).is_some() => Ok(None),
        None => Err(ResolveError::Unbound(id.clone())),
    }
}

/// Every glyph the registry names directly: bare radicals, then bound glyphs,
/// keyed by canonical id without duplicates.
pub fn known_glyphs(registry: &Registry) -> Vec<(String, Glyph)> {
    let mut out: Vec<(String, Glyph)> = Vec::new();
    let candidates = registry
        .radicals()
        .iter()
        .map(|r| Glyph::bare(r.id.clone()))
        .chain(registry.bindings().iter().map(|b| b.glyph.clone()));
    for g in candidates {
        let canon = composer::canonicalize(&g, registry);
        let id = canonical_id(&canon, registry);
        if !out.iter().any(|(k, _)| *k == id) {
            out.push((id, canon));
        }
    }
    out
}

/// A glyph described as JSON: region fills are mark ids, `null` for absence,
/// or nested glyph objects.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GlyphSpec {
    pub radical: String,
    #[serde(default)]
    pub assignment: BTreeMap<String, Option<FillSpec>>,
    #[serde(default)]
    pub rules: Vec<String>,
    #[serde(default)]
    pub abbreviated: bool,
    #[serde(default)]
    pub expansions: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FillSpec {
    Mark(String),
    Glyph(Box<GlyphSpec>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComposeRequest {
    #[serde(flatten)]
    pub glyph: GlyphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptSummary {
    pub id: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposeResponse {
    pub svg: String,
    pub constraints: Vec<String>,
    pub concept: Option<ConceptSummary>,
    pub canonical_id: String,
    pub canonical_text: String,
    pub irregular: bool,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ComposeError {
    #[error(transparent)]
    Glyph(#[from] GlyphError),
    #[error("request carries more than {MAX_PAYLOAD_ITEMS} {0}")]
    TooLarge(&'static str),
    #[error("size must lie between 16 and 4096")]
    BadSize,
    #[error(transparent)]
    Render(#[from] RenderError),
}

/// Builds a glyph through the composer operations so each step is checked.
pub fn build_glyph(spec: &GlyphSpec, registry: &Registry) -> Result<Glyph, ComposeError> {
    let mut budget = MAX_PAYLOAD_ITEMS;
    build_inner(spec, registry, &mut budget)
}

fn build_inner(spec: &GlyphSpec, registry: &Registry, budget: &mut usize) -> Result<Glyph, ComposeError> {
    let mut take = |n: usize, what: &'static str| {
        if n > *budget {
            return Err(ComposeError::TooLarge(what));
        }
        *budget -= n;
        Ok(())
    };
    take(spec.assignment.len(), "assignment entries")?;
    take(spec.rules.len(), "rules")?;
    take(spec.expansions.len(), "expansions")?;

    let radical = RadicalId::new(spec.radical.as_str());
    registry.radical(&radical).ok_or_else(|| GlyphError::UnknownRadical(radical.clone()))?;
    let mut g = Glyph::bare(radical.clone());
    for (region, fill) in &spec.assignment {
        g = match fill {
            None => composer::place_mark(&g, region, None, registry)?,
            Some(FillSpec::Mark(m)) => composer::place_mark(&g, region, Some(&MarkId::new(m.as_str())), registry)?,
            Some(FillSpec::Glyph(sub)) => {
                let sub = build_inner(sub, registry, budget)?;
                let placed = composer::combine_at(&sub, &radical, region, registry)?;
                let mut next = g.clone();
                next.set_fill(region, placed.fill(region).cloned().expect("combine_at fills the region"));
                constraint_of(&next, registry)?;
                next
            }
        };
    }
    for rule in &spec.rules {
        g = composer::apply_derivation(&g, &RuleId::new(rule.as_str()), registry)?;
    }
    if spec.abbreviated {
        g = composer::abbreviate(&g, registry)?;
    }
    for (region, scale) in &spec.expansions {
        g = composer::expand_region(&g, region, *scale, registry)?;
    }
    registry.validate_glyph(&g)?;
    Ok(composer::canonicalize(&g, registry))
}

/// The full compose pipeline: build, read, look up and render.
pub fn compose(req: &ComposeRequest, registry: &Registry) -> Result<ComposeResponse, ComposeError> {
    let size = req.size.unwrap_or(DEFAULT_SIZE);
    if !(16..=4096).contains(&size) {
        return Err(ComposeError::BadSize);
    }
    let glyph = build_glyph(&req.glyph, registry)?;
    describe(&glyph, size, registry)
}

/// Response fields for an already-built glyph.
pub fn describe(glyph: &Glyph, size: u32, registry: &Registry) -> Result<ComposeResponse, ComposeError> {
    let svg = render::glyph_svg(glyph, registry, size)?;
    Ok(ComposeResponse {
        svg,
        constraints: constraint_of(glyph, registry)?.to_strings(),
        concept: lookup_concept(glyph, registry)
            .map(|c| ConceptSummary { id: c.id.to_string(), name: c.name.clone() }),
        canonical_id: canonical_id(glyph, registry),
        canonical_text: canonical_text(glyph, registry),
        irregular: composer::is_irregular(glyph, registry),
    })
}

/// Inverse of [`build_glyph`] for canonical glyphs.
pub fn spec_of(glyph: &Glyph) -> GlyphSpec {
    GlyphSpec {
        radical: glyph.radical.to_string(),
        assignment: glyph
            .assignment
            .iter()
            .map(|e| {
                let fill = match &e.fill {
                    Fill::Absent => None,
                    Fill::Mark(m) => Some(FillSpec::Mark(m.to_string())),
                    Fill::Glyph(sub) => Some(FillSpec::Glyph(Box::new(spec_of(sub)))),
                };
                (e.region.clone(), fill)
            })
            .collect(),
        rules: glyph.derivations.iter().map(|r| r.to_string()).collect(),
        abbreviated: glyph.abbreviated,
        expansions: glyph.expansions.iter().map(|e| (e.region.clone(), e.scale.as_f64())).collect(),
    }
}
