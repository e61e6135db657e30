//! Glyph construction: marks, derivation rules, structure/topology combination,
//! abbreviation, region expansion and canonical forms.
//!
//! Every operation returns a new glyph and leaves its input untouched.

use sha2::{Digest, Sha256};

use crate::dsl::printer::print_glyph;
use crate::model::*;
use crate::registry::{GlyphError, Registry, MAX_NESTING};
use crate::semantics::constraint_of;

/// Sets `region` to `mark`, or clears it with `None`. Last write wins.
pub fn place_mark(
    glyph: &Glyph,
    region: &str,
    mark: Option<&MarkId>,
    registry: &Registry,
) -> Result<Glyph, GlyphError> {
    let radical = registry.radical_of(glyph)?;
    let reg = radical.schema.region(region).ok_or_else(|| GlyphError::UnknownRegion {
        radical: radical.id.clone(),
        region: region.to_owned(),
    })?;
    let mut out = glyph.clone();
    match mark {
        Some(m) => {
            registry.check_mark_admissible(reg, m)?;
            out.set_fill(region, Fill::Mark(m.clone()));
        }
        None => out.set_fill(region, Fill::Absent),
    }
    constraint_of(&out, registry)?;
    Ok(out)
}

pub fn apply_derivation(glyph: &Glyph, rule: &RuleId, registry: &Registry) -> Result<Glyph, GlyphError> {
    let r = registry.rule_of(rule)?;
    if glyph.derivations.contains(rule) {
        return Err(GlyphError::AlreadyApplied(rule.clone()));
    }
    registry.check_rule_source(r, registry.radical_of(glyph)?)?;
    let available = glyph.all_rules();
    if let Some(missing) = r.requires.iter().find(|req| !available.contains(req)) {
        return Err(GlyphError::Precondition {
            rule: rule.clone(),
            reason: format!("requires rule `{missing}` to be applied first"),
        });
    }
    let mut out = glyph.clone();
    out.derivations.push(rule.clone());
    constraint_of(&out, registry)?;
    strokes_after_edits(&out, registry)?;
    Ok(out)
}

/// Embeds a structure glyph in the algebraic region of a topological radical.
pub fn combine(structure: &Glyph, radical: &RadicalId, registry: &Registry) -> Result<Glyph, GlyphError> {
    let rad = registry.radical(radical).ok_or_else(|| GlyphError::UnknownRadical(radical.clone()))?;
    if rad.family != Family::Topological {
        return Err(GlyphError::NotTopological(radical.clone()));
    }
    let home = rad.schema.embedding_home().ok_or_else(|| GlyphError::NoAlgebraicRegion(radical.clone()))?;
    combine_at(structure, radical, &home.name.clone(), registry)
}

/// Embeds a structure glyph in an arbitrary region. Placement outside the
/// embedding home is allowed but marks the result irregular.
pub fn combine_at(
    structure: &Glyph,
    radical: &RadicalId,
    region: &str,
    registry: &Registry,
) -> Result<Glyph, GlyphError> {
    let rad = registry.radical(radical).ok_or_else(|| GlyphError::UnknownRadical(radical.clone()))?;
    let sub = registry.radical_of(structure)?;
    if sub.family != Family::Structure {
        return Err(GlyphError::NotStructure(sub.id.clone()));
    }
    if rad.schema.region(region).is_none() {
        return Err(GlyphError::UnknownRegion { radical: radical.clone(), region: region.to_owned() });
    }
    if structure.nesting_depth() + 1 > MAX_NESTING {
        return Err(GlyphError::NestingTooDeep);
    }
    registry.validate_glyph(structure)?;
    let mut out = Glyph::bare(radical.clone());
    out.set_fill(region, Fill::Glyph(Box::new(structure.clone())));
    constraint_of(&out, registry)?;
    Ok(out)
}

/// True if some sub-glyph, at any depth, sits outside its host's embedding home.
pub fn is_irregular(glyph: &Glyph, registry: &Registry) -> bool {
    let home = registry
        .radical(&glyph.radical)
        .and_then(|r| r.schema.embedding_home())
        .map(|r| r.name.as_str());
    glyph
        .embedded()
        .any(|(region, sub)| Some(region) != home || is_irregular(sub, registry))
}

/// Suppresses the limit file. Purely visual.
pub fn abbreviate(glyph: &Glyph, registry: &Registry) -> Result<Glyph, GlyphError> {
    set_abbreviated(glyph, true, registry)
}

/// Restores the limit file; identity on a glyph that is not abbreviated.
pub fn expand(glyph: &Glyph, registry: &Registry) -> Result<Glyph, GlyphError> {
    set_abbreviated(glyph, false, registry)
}

fn set_abbreviated(glyph: &Glyph, on: bool, registry: &Registry) -> Result<Glyph, GlyphError> {
    if registry.radical_of(glyph)?.limit_file.is_none() {
        return Err(GlyphError::NoLimitFile(glyph.radical.clone()));
    }
    let mut out = glyph.clone();
    out.abbreviated = on;
    Ok(out)
}

/// Scales an expandable region about its anchor. Purely visual.
pub fn expand_region(glyph: &Glyph, region: &str, scale: f64, registry: &Registry) -> Result<Glyph, GlyphError> {
    let radical = registry.radical_of(glyph)?;
    let reg = radical.schema.region(region).ok_or_else(|| GlyphError::UnknownRegion {
        radical: radical.id.clone(),
        region: region.to_owned(),
    })?;
    if !reg.expandable {
        return Err(GlyphError::NotExpandable(region.to_owned()));
    }
    let scale = Scale::from_f64(scale).ok_or_else(|| GlyphError::InvalidScale(scale.to_string()))?;
    let mut out = glyph.clone();
    out.expansions.retain(|e| e.region != region);
    if scale != Scale::IDENTITY {
        out.expansions.push(Expansion { region: region.to_owned(), scale });
    }
    registry.validate_glyph(&out)?;
    Ok(out)
}

/// Normal form: absent entries dropped, last write per region kept, entries in
/// schema order, derivations in declaration order, identity expansions dropped,
/// sub-glyphs canonicalized. Unknown names sort last, by name.
pub fn canonicalize(glyph: &Glyph, registry: &Registry) -> Glyph {
    let radical = registry.radical(&glyph.radical);
    let region_pos = |name: &str| radical.and_then(|r| r.schema.position(name)).unwrap_or(usize::MAX);

    let mut assignment: Vec<RegionFill> = Vec::new();
    for entry in &glyph.assignment {
        assignment.retain(|e| e.region != entry.region);
        assignment.push(entry.clone());
    }
    assignment.retain(|e| e.fill != Fill::Absent);
    for e in &mut assignment {
        if let Fill::Glyph(sub) = &e.fill {
            e.fill = Fill::Glyph(Box::new(canonicalize(sub, registry)));
        }
    }
    assignment.sort_by(|a, b| (region_pos(&a.region), &a.region).cmp(&(region_pos(&b.region), &b.region)));

    let mut derivations: Vec<RuleId> = Vec::new();
    for d in &glyph.derivations {
        if !derivations.contains(d) {
            derivations.push(d.clone());
        }
    }
    derivations.sort_by_key(|d| (registry.rule_index(d).unwrap_or(usize::MAX), d.clone()));

    let mut expansions: Vec<Expansion> = Vec::new();
    for e in &glyph.expansions {
        expansions.retain(|x| x.region != e.region);
        expansions.push(e.clone());
    }
    expansions.retain(|e| e.scale != Scale::IDENTITY);
    expansions.sort_by(|a, b| (region_pos(&a.region), &a.region).cmp(&(region_pos(&b.region), &b.region)));

    Glyph { radical: glyph.radical.clone(), assignment, derivations, abbreviated: glyph.abbreviated, expansions }
}

/// Canonical form with visual-only state (abbreviation, expansions) erased at
/// every level. The meaning map is keyed on this.
pub fn semantic_key(glyph: &Glyph, registry: &Registry) -> Glyph {
    fn strip(g: &mut Glyph) {
        g.abbreviated = false;
        g.expansions.clear();
        for e in &mut g.assignment {
            if let Fill::Glyph(sub) = &mut e.fill {
                strip(sub);
            }
        }
    }
    let mut key = canonicalize(glyph, registry);
    strip(&mut key);
    key
}

/// The canonical glyph literal, as written in definition sources.
pub fn canonical_text(glyph: &Glyph, registry: &Registry) -> String {
    print_glyph(&canonicalize(glyph, registry))
}

/// Stable identifier: the radical id for a bare glyph, otherwise the radical
/// id followed by the first 12 hex digits of the SHA-256 of the canonical text.
pub fn canonical_id(glyph: &Glyph, registry: &Registry) -> String {
    let canon = canonicalize(glyph, registry);
    if canon == Glyph::bare(canon.radical.clone()) {
        return canon.radical.to_string();
    }
    let digest = Sha256::digest(print_glyph(&canon).as_bytes());
    format!("{}-{}", canon.radical, &hex::encode(digest)[..12])
}

/// The radical's strokes after applying each derivation's edits in order.
/// Limit-file strokes are included regardless of abbreviation.
pub fn strokes_after_edits(glyph: &Glyph, registry: &Registry) -> Result<Vec<Stroke>, GlyphError> {
    let radical = registry.radical_of(glyph)?;
    let mut strokes = radical.strokes.clone();
    for id in &glyph.derivations {
        let rule = registry.rule_of(id)?;
        for edit in &rule.edits {
            apply_edit(&mut strokes, edit).map_err(|reason| GlyphError::MalformedEdit { rule: id.clone(), reason })?;
        }
    }
    Ok(strokes)
}

fn apply_edit(strokes: &mut Vec<Stroke>, edit: &StrokeEdit) -> Result<(), String> {
    let find = |strokes: &Vec<Stroke>, name: &str| {
        strokes.iter().position(|s| s.name == name).ok_or_else(|| format!("no stroke named `{name}`"))
    };
    match edit {
        StrokeEdit::ExtendStroke { stroke, dx, dy } => {
            let i = find(strokes, stroke)?;
            let s = &mut strokes[i];
            match &mut s.shape {
                Shape::Dot { center } => {
                    let c = *center;
                    s.shape = Shape::Line { points: vec![c, Point::new(c.x + dx, c.y + dy)] };
                }
                Shape::Line { points } => {
                    let last = points.last_mut().expect("lines have points");
                    last.x += dx;
                    last.y += dy;
                }
                other => return Err(format!("cannot extend {} stroke `{stroke}`", other.keyword())),
            }
        }
        StrokeEdit::AddStroke { stroke } => {
            if strokes.iter().any(|s| s.name == stroke.name) {
                return Err(format!("stroke `{}` already exists", stroke.name));
            }
            strokes.push(stroke.clone());
        }
        StrokeEdit::ReplaceStrokes { targets, with } => {
            let mut at = usize::MAX;
            for t in targets {
                at = at.min(find(strokes, t)?);
            }
            strokes.retain(|s| !targets.contains(&s.name));
            for (k, s) in with.iter().enumerate() {
                if strokes.iter().any(|x| x.name == s.name) {
                    return Err(format!("stroke `{}` already exists", s.name));
                }
                strokes.insert((at + k).min(strokes.len()), s.clone());
            }
        }
        StrokeEdit::AddCenterCircle { name, radius } => {
            if strokes.iter().any(|s| &s.name == name) {
                return Err(format!("stroke `{name}` already exists"));
            }
            strokes.push(Stroke {
                name: name.clone(),
                shape: Shape::Circle { center: Point::new(0.5, 0.5), radius: *radius },
                group: None,
                weight: Weight::Regular,
            });
        }
        StrokeEdit::CrossTransform { targets, half } => {
            for t in targets {
                find(strokes, t)?;
            }
            strokes.retain(|s| !targets.contains(&s.name));
            if strokes.iter().any(|s| s.name == "cross") {
                return Err("stroke `cross` already exists".into());
            }
            strokes.push(Stroke {
                name: "cross".into(),
                shape: Shape::Line { points: vec![Point::new(0.5 - half, 0.5), Point::new(0.5 + half, 0.5)] },
                group: None,
                weight: Weight::Regular,
            });
        }
    }
    for s in strokes.iter() {
        for v in s.shape.params() {
            if !v.is_finite() {
                return Err(format!("stroke `{}` has a non-finite coordinate", s.name));
            }
        }
    }
    Ok(())
}
