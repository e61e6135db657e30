//! The compiled, immutable registry and glyph validity checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::composer;
use crate::model::*;
use crate::semantics::{self, LiteralConjunction};

/// Maximum levels of sub-glyph embedding.
pub const MAX_NESTING: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Constraint,
    Mark,
    Radical,
    Rule,
    Concept,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Constraint => "constraint",
            EntityKind::Mark => "mark",
            EntityKind::Radical => "radical",
            EntityKind::Rule => "rule",
            EntityKind::Concept => "concept",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        [
            EntityKind::Constraint,
            EntityKind::Mark,
            EntityKind::Radical,
            EntityKind::Rule,
            EntityKind::Concept,
        ]
        .into_iter()
        .find(|k| k.keyword() == s)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Entity<'a> {
    Constraint(&'a PropertyConstraint),
    Mark(&'a Mark),
    Radical(&'a Radical),
    Rule(&'a DerivationRule),
    Concept(&'a Concept),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("no {kind} with id `{id}`")]
    NotFound { kind: EntityKind, id: String },
    #[error("`{0}` is not a well-formed identifier")]
    MalformedId(String),
}

/// The definition a registry error is attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    Entity(EntityKind, String),
    Binding(usize),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Entity(kind, id) => write!(f, "{kind} `{id}`"),
            Locus::Binding(i) => write!(f, "binding #{}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RegistryErrorKind {
    #[error("duplicate {0} id")]
    DuplicateId(EntityKind),
    #[error("references unknown {kind} `{id}`")]
    Dangling { kind: EntityKind, id: String },
    #[error("{0}")]
    Invalid(String),
    #[error("invalid glyph: {0}")]
    Glyph(#[from] GlyphError),
    #[error("glyph {glyph} is already bound to concept `{first}`; cannot also mean `{second}`")]
    Overload { glyph: String, first: ConceptId, second: ConceptId },
    #[error("duplicate binding of {glyph} to `{concept}`")]
    DuplicateBinding { glyph: String, concept: ConceptId },
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{locus}: {kind}")]
pub struct RegistryError {
    pub locus: Locus,
    pub kind: RegistryErrorKind,
}

impl RegistryError {
    fn at(locus: Locus, kind: RegistryErrorKind) -> Self {
        RegistryError { locus, kind }
    }

    fn entity(kind: EntityKind, id: &str, err: RegistryErrorKind) -> Self {
        Self::at(Locus::Entity(kind, id.to_owned()), err)
    }
}

/// Errors from building, validating or transforming a glyph.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GlyphError {
    #[error("unknown radical `{0}`")]
    UnknownRadical(RadicalId),
    #[error("radical `{radical}` has no region `{region}`")]
    UnknownRegion { radical: RadicalId, region: String },
    #[error("unknown mark `{0}`")]
    UnknownMark(MarkId),
    #[error("unknown rule `{0}`")]
    UnknownRule(RuleId),
    #[error("region `{region}` holds constraint `{constraint}`, which cannot take a negative mark")]
    NotNegatable { region: String, constraint: ConstraintId },
    #[error("rule `{rule}` does not apply: {reason}")]
    Precondition { rule: RuleId, reason: String },
    #[error("rule `{0}` is already applied")]
    AlreadyApplied(RuleId),
    #[error("conflicting literals for `{0}`")]
    LiteralConflict(ConstraintId),
    #[error("only structure glyphs can be embedded; `{0}` is not structure-family")]
    NotStructure(RadicalId),
    #[error("`{0}` is not a topological radical")]
    NotTopological(RadicalId),
    #[error("radical `{0}` has no expandable algebraic region")]
    NoAlgebraicRegion(RadicalId),
    #[error("sub-glyph nesting deeper than {MAX_NESTING}")]
    NestingTooDeep,
    #[error("region `{0}` is not expandable")]
    NotExpandable(String),
    #[error("region `{region}` would overlap region `{other}`")]
    RegionOverlap { region: String, other: String },
    #[error("region `{0}` would leave the bounding box")]
    OutOfBounds(String),
    #[error("invalid scale {0}")]
    InvalidScale(String),
    #[error("radical `{0}` has no limit file")]
    NoLimitFile(RadicalId),
    #[error("rule `{rule}`: malformed stroke edit: {reason}")]
    MalformedEdit { rule: RuleId, reason: String },
}

/// The compiled visual type theory: an immutable, cross-checked definition set
/// plus lookup indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Registry {
    defs: Definitions,
    constraint_ix: BTreeMap<ConstraintId, usize>,
    mark_ix: BTreeMap<MarkId, usize>,
    radical_ix: BTreeMap<RadicalId, usize>,
    rule_ix: BTreeMap<RuleId, usize>,
    concept_ix: BTreeMap<ConceptId, usize>,
    /// Semantic key of each bound glyph to the binding indices that carry it.
    meaning: BTreeMap<Glyph, Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Strict,
    Lenient,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::new(Definitions::default()).expect("empty definitions are valid")
    }

    /// Builds a registry, enforcing every invariant including meaning-map
    /// functionality.
    pub fn new(defs: Definitions) -> Result<Self, RegistryError> {
        Self::build(defs, Mode::Strict)
    }

    /// Like [`Registry::new`] but tolerates a glyph bound to several concepts,
    /// so that the validator can report such overloads instead of refusing them.
    pub fn new_lenient(defs: Definitions) -> Result<Self, RegistryError> {
        Self::build(defs, Mode::Lenient)
    }

    fn build(defs: Definitions, mode: Mode) -> Result<Self, RegistryError> {
        let constraint_ix = index(&defs.constraints, EntityKind::Constraint, |c| &c.id)?;
        let mark_ix = index(&defs.marks, EntityKind::Mark, |m| &m.id)?;
        let radical_ix = index(&defs.radicals, EntityKind::Radical, |r| &r.id)?;
        let rule_ix = index(&defs.rules, EntityKind::Rule, |r| &r.id)?;
        let concept_ix = index(&defs.concepts, EntityKind::Concept, |c| &c.id)?;

        let mut reg = Registry {
            defs,
            constraint_ix,
            mark_ix,
            radical_ix,
            rule_ix,
            concept_ix,
            meaning: BTreeMap::new(),
        };
        reg.check_constraints()?;
        reg.check_marks()?;
        reg.check_radicals()?;
        reg.check_rules()?;
        reg.check_concepts()?;
        reg.index_bindings(mode)?;
        Ok(reg)
    }

    fn check_constraints(&self) -> Result<(), RegistryError> {
        for c in &self.defs.constraints {
            if c.name.trim().is_empty() {
                return Err(RegistryError::entity(
                    EntityKind::Constraint,
                    c.id.as_str(),
                    RegistryErrorKind::Invalid("name must not be empty".into()),
                ));
            }
        }
        Ok(())
    }

    fn check_marks(&self) -> Result<(), RegistryError> {
        let mut polarities = BTreeSet::new();
        let mut shapes = BTreeSet::new();
        for m in &self.defs.marks {
            let err = |msg: String| {
                RegistryError::entity(EntityKind::Mark, m.id.as_str(), RegistryErrorKind::Invalid(msg))
            };
            if !polarities.insert(m.polarity) {
                return Err(err(format!("a {} mark is already declared", m.polarity.keyword())));
            }
            if !shapes.insert(m.shape) {
                return Err(err(format!("shape `{}` is already used by another mark", m.shape.keyword())));
            }
        }
        Ok(())
    }

    fn check_radicals(&self) -> Result<(), RegistryError> {
        for r in &self.defs.radicals {
            let locus = || Locus::Entity(EntityKind::Radical, r.id.to_string());
            let invalid = |msg: String| RegistryError::at(locus(), RegistryErrorKind::Invalid(msg));
            if r.name.trim().is_empty() {
                return Err(invalid("name must not be empty".into()));
            }
            if r.strokes.is_empty() {
                return Err(invalid("a radical needs at least one stroke".into()));
            }
            let mut names = BTreeSet::new();
            for s in &r.strokes {
                if !names.insert(s.name.as_str()) {
                    return Err(invalid(format!("duplicate stroke name `{}`", s.name)));
                }
                check_shape(&s.shape).map_err(|e| invalid(format!("stroke `{}`: {e}", s.name)))?;
            }
            if let Some(parent) = &r.derives_from {
                if !self.radical_ix.contains_key(parent) {
                    return Err(RegistryError::at(
                        locus(),
                        RegistryErrorKind::Dangling { kind: EntityKind::Radical, id: parent.to_string() },
                    ));
                }
            }
            if let Some(group) = &r.limit_file {
                if !r.strokes.iter().any(|s| s.group.as_deref() == Some(group)) {
                    return Err(invalid(format!("limit file `{group}` names no stroke group")));
                }
            }
            if !r.asymmetry.is_finite() || r.asymmetry.abs() > 0.5 {
                return Err(invalid("asymmetry must lie in [-0.5, 0.5]".into()));
            }
            let mut region_names = BTreeSet::new();
            for (i, reg) in r.schema.regions.iter().enumerate() {
                if !is_valid_id(&reg.name) {
                    return Err(invalid(format!("`{}` is not a valid region name", reg.name)));
                }
                if !region_names.insert(reg.name.as_str()) {
                    return Err(invalid(format!("duplicate region `{}`", reg.name)));
                }
                if !self.constraint_ix.contains_key(&reg.constraint) {
                    return Err(RegistryError::at(
                        locus(),
                        RegistryErrorKind::Dangling {
                            kind: EntityKind::Constraint,
                            id: reg.constraint.to_string(),
                        },
                    ));
                }
                if !(reg.extent.w > 0.0 && reg.extent.h > 0.0) {
                    return Err(invalid(format!("region `{}` has an empty extent", reg.name)));
                }
                let rect = reg.rect();
                if !rect.within_unit_box() {
                    return Err(invalid(format!("region `{}` leaves the bounding box", reg.name)));
                }
                if let Some(other) = r.schema.regions[..i].iter().find(|o| o.rect().overlaps(&rect)) {
                    return Err(invalid(format!("regions `{}` and `{}` overlap", other.name, reg.name)));
                }
            }
            let mut baseline = LiteralConjunction::new();
            for lit in &r.baseline {
                if !self.constraint_ix.contains_key(&lit.constraint) {
                    return Err(RegistryError::at(
                        locus(),
                        RegistryErrorKind::Dangling {
                            kind: EntityKind::Constraint,
                            id: lit.constraint.to_string(),
                        },
                    ));
                }
                baseline
                    .insert(lit.clone())
                    .map_err(|e| RegistryError::at(locus(), RegistryErrorKind::Glyph(e)))?;
            }
        }
        // derivation lineage must be acyclic
        for r in &self.defs.radicals {
            let mut seen = BTreeSet::new();
            let mut cur = Some(&r.id);
            while let Some(id) = cur {
                if !seen.insert(id) {
                    return Err(RegistryError::entity(
                        EntityKind::Radical,
                        r.id.as_str(),
                        RegistryErrorKind::Invalid("radical lineage is cyclic".into()),
                    ));
                }
                cur = self.radical(id).and_then(|x| x.derives_from.as_ref());
            }
        }
        Ok(())
    }

    fn check_rules(&self) -> Result<(), RegistryError> {
        for (i, rule) in self.defs.rules.iter().enumerate() {
            let locus = || Locus::Entity(EntityKind::Rule, rule.id.to_string());
            let dangling = |kind, id: &str| {
                RegistryError::at(locus(), RegistryErrorKind::Dangling { kind, id: id.to_owned() })
            };
            let invalid = |msg: String| RegistryError::at(locus(), RegistryErrorKind::Invalid(msg));
            if let RuleSource::Radical(r) = &rule.source {
                if !self.radical_ix.contains_key(r) {
                    return Err(dangling(EntityKind::Radical, r.as_str()));
                }
            }
            for req in &rule.requires {
                match self.rule_ix.get(req) {
                    None => return Err(dangling(EntityKind::Rule, req.as_str())),
                    Some(&j) if j >= i => {
                        return Err(invalid(format!("required rule `{req}` must be declared earlier")))
                    }
                    _ => {}
                }
            }
            if rule.edits.is_empty() && rule.adds.is_empty() {
                return Err(invalid("a rule needs stroke edits or literals".into()));
            }
            let mut adds = LiteralConjunction::new();
            for lit in &rule.adds {
                if !self.constraint_ix.contains_key(&lit.constraint) {
                    return Err(dangling(EntityKind::Constraint, lit.constraint.as_str()));
                }
                adds.insert(lit.clone()).map_err(|e| RegistryError::at(locus(), e.into()))?;
            }
            for edit in &rule.edits {
                let added: Vec<&Stroke> = match edit {
                    StrokeEdit::AddStroke { stroke } => vec![stroke],
                    StrokeEdit::ReplaceStrokes { targets, with } => {
                        if targets.is_empty() {
                            return Err(invalid("replace edit names no target strokes".into()));
                        }
                        with.iter().collect()
                    }
                    StrokeEdit::CrossTransform { half, .. } if !(*half > 0.0 && *half <= 0.5) => {
                        return Err(invalid("cross half-width must lie in (0, 0.5]".into()))
                    }
                    StrokeEdit::AddCenterCircle { radius, .. } if !(*radius > 0.0 && *radius <= 0.5) => {
                        return Err(invalid("center circle radius must lie in (0, 0.5]".into()))
                    }
                    _ => vec![],
                };
                for s in added {
                    check_shape(&s.shape).map_err(|e| invalid(format!("stroke `{}`: {e}", s.name)))?;
                }
            }
            if let Some(c) = &rule.target_concept {
                if !self.concept_ix.contains_key(c) {
                    return Err(dangling(EntityKind::Concept, c.as_str()));
                }
            }
        }
        Ok(())
    }

    fn check_concepts(&self) -> Result<(), RegistryError> {
        for c in &self.defs.concepts {
            if c.name.trim().is_empty() {
                return Err(RegistryError::entity(
                    EntityKind::Concept,
                    c.id.as_str(),
                    RegistryErrorKind::Invalid("name must not be empty".into()),
                ));
            }
        }
        Ok(())
    }

    fn index_bindings(&mut self, mode: Mode) -> Result<(), RegistryError> {
        let mut meaning: BTreeMap<Glyph, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.defs.bindings.iter().enumerate() {
            let locus = || Locus::Binding(i);
            if !self.concept_ix.contains_key(&b.concept) {
                return Err(RegistryError::at(
                    locus(),
                    RegistryErrorKind::Dangling { kind: EntityKind::Concept, id: b.concept.to_string() },
                ));
            }
            self.validate_glyph(&b.glyph).map_err(|e| RegistryError::at(locus(), e.into()))?;
            let key = composer::semantic_key(&b.glyph, self);
            let entry = meaning.entry(key).or_default();
            for &j in entry.iter() {
                let other = &self.defs.bindings[j];
                if other.concept == b.concept {
                    return Err(RegistryError::at(
                        locus(),
                        RegistryErrorKind::DuplicateBinding {
                            glyph: composer::canonical_text(&b.glyph, self),
                            concept: b.concept.clone(),
                        },
                    ));
                }
                if mode == Mode::Strict {
                    return Err(RegistryError::at(
                        locus(),
                        RegistryErrorKind::Overload {
                            glyph: composer::canonical_text(&b.glyph, self),
                            first: other.concept.clone(),
                            second: b.concept.clone(),
                        },
                    ));
                }
            }
            entry.push(i);
        }
        self.meaning = meaning;
        Ok(())
    }

    // ---- accessors ----

    pub fn definitions(&self) -> &Definitions {
        &self.defs
    }

    pub fn into_definitions(self) -> Definitions {
        self.defs
    }

    pub fn constraints(&self) -> &[PropertyConstraint] {
        &self.defs.constraints
    }

    pub fn marks(&self) -> &[Mark] {
        &self.defs.marks
    }

    pub fn radicals(&self) -> &[Radical] {
        &self.defs.radicals
    }

    pub fn rules(&self) -> &[DerivationRule] {
        &self.defs.rules
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.defs.concepts
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.defs.bindings
    }

    pub fn constraint(&self, id: &ConstraintId) -> Option<&PropertyConstraint> {
        self.constraint_ix.get(id).map(|&i| &self.defs.constraints[i])
    }

    pub fn mark(&self, id: &MarkId) -> Option<&Mark> {
        self.mark_ix.get(id).map(|&i| &self.defs.marks[i])
    }

    pub fn radical(&self, id: &RadicalId) -> Option<&Radical> {
        self.radical_ix.get(id).map(|&i| &self.defs.radicals[i])
    }

    pub fn rule(&self, id: &RuleId) -> Option<&DerivationRule> {
        self.rule_ix.get(id).map(|&i| &self.defs.rules[i])
    }

    /// Declaration index of a rule; declaration order is a dependency order.
    pub fn rule_index(&self, id: &RuleId) -> Option<usize> {
        self.rule_ix.get(id).copied()
    }

    pub fn concept(&self, id: &ConceptId) -> Option<&Concept> {
        self.concept_ix.get(id).map(|&i| &self.defs.concepts[i])
    }

    pub fn mark_for(&self, polarity: Polarity) -> Option<&Mark> {
        self.defs.marks.iter().find(|m| m.polarity == polarity)
    }

    /// Generic entity lookup. Never mutates.
    pub fn get(&self, kind: EntityKind, id: &str) -> Result<Entity<'_>, LookupError> {
        if !is_valid_id(id) {
            return Err(LookupError::MalformedId(id.to_owned()));
        }
        let found = match kind {
            EntityKind::Constraint => self.constraint(&ConstraintId::new(id)).map(Entity::Constraint),
            EntityKind::Mark => self.mark(&MarkId::new(id)).map(Entity::Mark),
            EntityKind::Radical => self.radical(&RadicalId::new(id)).map(Entity::Radical),
            EntityKind::Rule => self.rule(&RuleId::new(id)).map(Entity::Rule),
            EntityKind::Concept => self.concept(&ConceptId::new(id)).map(Entity::Concept),
        };
        found.ok_or_else(|| LookupError::NotFound { kind, id: id.to_owned() })
    }

    /// Bindings whose glyph has the given semantic key.
    pub fn bindings_for_key(&self, key: &Glyph) -> impl Iterator<Item = &Binding> {
        self.meaning.get(key).into_iter().flatten().map(|&i| &self.defs.bindings[i])
    }

    /// Semantic keys with their binding indices, in key order.
    pub fn meaning_map(&self) -> impl Iterator<Item = (&Glyph, &[usize])> {
        self.meaning.iter().map(|(k, v)| (k, v.as_slice()))
    }

    // ---- lineage ----

    /// Follows `derives_from` links up to the root radical.
    pub fn lineage_root<'a>(&'a self, id: &'a RadicalId) -> &'a RadicalId {
        let mut cur = id;
        while let Some(parent) = self.radical(cur).and_then(|r| r.derives_from.as_ref()) {
            cur = parent;
        }
        cur
    }

    /// The chain `id, parent, grandparent, ...`.
    pub fn ancestry<'a>(&'a self, id: &'a RadicalId) -> Vec<&'a RadicalId> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(parent) = self.radical(cur).and_then(|r| r.derives_from.as_ref()) {
            out.push(parent);
            cur = parent;
        }
        out
    }

    /// Lineage roots of a glyph's radical and of all its embedded sub-glyphs.
    pub fn glyph_lineage(&self, glyph: &Glyph) -> BTreeSet<RadicalId> {
        let mut out = BTreeSet::new();
        out.insert(self.lineage_root(&glyph.radical).clone());
        for (_, sub) in glyph.embedded() {
            out.extend(self.glyph_lineage(sub));
        }
        out
    }

    // ---- glyph validity ----

    pub(crate) fn radical_of(&self, glyph: &Glyph) -> Result<&Radical, GlyphError> {
        self.radical(&glyph.radical)
            .ok_or_else(|| GlyphError::UnknownRadical(glyph.radical.clone()))
    }

    pub(crate) fn rule_of(&self, id: &RuleId) -> Result<&DerivationRule, GlyphError> {
        self.rule(id).ok_or_else(|| GlyphError::UnknownRule(id.clone()))
    }

    /// Checks every glyph invariant against this registry.
    pub fn validate_glyph(&self, glyph: &Glyph) -> Result<(), GlyphError> {
        if glyph.nesting_depth() > MAX_NESTING {
            return Err(GlyphError::NestingTooDeep);
        }
        self.validate_fills(glyph)?;
        self.validate_derivations(glyph)?;
        semantics::constraint_of(glyph, self)?;
        self.validate_expansions(glyph)?;
        if glyph.abbreviated && self.radical_of(glyph)?.limit_file.is_none() {
            return Err(GlyphError::NoLimitFile(glyph.radical.clone()));
        }
        composer::strokes_after_edits(glyph, self)?;
        Ok(())
    }

    fn validate_fills(&self, glyph: &Glyph) -> Result<(), GlyphError> {
        let radical = self.radical_of(glyph)?;
        for entry in &glyph.assignment {
            let region = radical.schema.region(&entry.region).ok_or_else(|| GlyphError::UnknownRegion {
                radical: radical.id.clone(),
                region: entry.region.clone(),
            })?;
            match &entry.fill {
                Fill::Absent => {}
                Fill::Mark(m) => self.check_mark_admissible(region, m)?,
                Fill::Glyph(sub) => {
                    let sub_radical = self.radical_of(sub)?;
                    if sub_radical.family != Family::Structure {
                        return Err(GlyphError::NotStructure(sub_radical.id.clone()));
                    }
                    self.validate_glyph(sub)?;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_mark_admissible(&self, region: &Region, mark: &MarkId) -> Result<(), GlyphError> {
        let mark = self.mark(mark).ok_or_else(|| GlyphError::UnknownMark(mark.clone()))?;
        if mark.polarity == Polarity::Negative {
            let negatable = self.constraint(&region.constraint).map(|c| c.negatable).unwrap_or(false);
            if !negatable {
                return Err(GlyphError::NotNegatable {
                    region: region.name.clone(),
                    constraint: region.constraint.clone(),
                });
            }
        }
        Ok(())
    }

    fn validate_derivations(&self, glyph: &Glyph) -> Result<(), GlyphError> {
        let radical = self.radical_of(glyph)?;
        let embedded_rules: Vec<&RuleId> =
            glyph.embedded().flat_map(|(_, sub)| sub.all_rules()).collect();
        for (i, id) in glyph.derivations.iter().enumerate() {
            let rule = self.rule_of(id)?;
            let earlier = &glyph.derivations[..i];
            if earlier.contains(id) {
                return Err(GlyphError::AlreadyApplied(id.clone()));
            }
            self.check_rule_source(rule, radical)?;
            for req in &rule.requires {
                if !earlier.contains(req) && !embedded_rules.contains(&req) {
                    return Err(GlyphError::Precondition {
                        rule: id.clone(),
                        reason: format!("requires rule `{req}` to be applied first"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Rules whose source admits glyphs on `radical`, in declaration order.
    pub fn rules_for<'a>(&'a self, radical: &'a Radical) -> impl Iterator<Item = &'a DerivationRule> + 'a {
        self.rules().iter().filter(move |r| self.check_rule_source(r, radical).is_ok())
    }

    pub(crate) fn check_rule_source(&self, rule: &DerivationRule, radical: &Radical) -> Result<(), GlyphError> {
        let ok = match &rule.source {
            RuleSource::Radical(r) => *r == radical.id,
            RuleSource::Family(f) => *f == radical.family,
        };
        if ok {
            Ok(())
        } else {
            let wanted = match &rule.source {
                RuleSource::Radical(r) => format!("radical `{r}`"),
                RuleSource::Family(f) => format!("{} family", f.keyword()),
            };
            Err(GlyphError::Precondition {
                rule: rule.id.clone(),
                reason: format!("applies to {wanted}, not radical `{}`", radical.id),
            })
        }
    }

    fn validate_expansions(&self, glyph: &Glyph) -> Result<(), GlyphError> {
        if glyph.expansions.is_empty() {
            return Ok(());
        }
        let radical = self.radical_of(glyph)?;
        for e in &glyph.expansions {
            let region = radical.schema.region(&e.region).ok_or_else(|| GlyphError::UnknownRegion {
                radical: radical.id.clone(),
                region: e.region.clone(),
            })?;
            if !region.expandable {
                return Err(GlyphError::NotExpandable(e.region.clone()));
            }
            if e.scale.0 == 0 {
                return Err(GlyphError::InvalidScale(e.scale.to_string()));
            }
        }
        let rects = region_rects(radical, glyph);
        for (i, (name, rect)) in rects.iter().enumerate() {
            if !rect.within_unit_box() {
                return Err(GlyphError::OutOfBounds(name.to_string()));
            }
            for (other, orect) in &rects[..i] {
                if rect.overlaps(orect) {
                    // name the expanded region first
                    let expanded = |n: &str| glyph.expansions.iter().any(|e| e.region == n);
                    let (a, b) = if expanded(name) { (name, other) } else { (other, name) };
                    return Err(GlyphError::RegionOverlap { region: a.to_string(), other: b.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// Region rectangles of `radical` after `glyph`'s expansions, in schema order.
pub fn region_rects<'a>(radical: &'a Radical, glyph: &Glyph) -> Vec<(&'a str, Rect)> {
    radical
        .schema
        .regions
        .iter()
        .map(|r| {
            let scale = glyph
                .expansions
                .iter()
                .rev()
                .find(|e| e.region == r.name)
                .map(|e| e.scale.as_f64())
                .unwrap_or(1.0);
            let extent = Extent { w: r.extent.w * scale, h: r.extent.h * scale };
            (r.name.as_str(), Rect::centered(r.anchor, extent))
        })
        .collect()
}

fn index<T, I: Clone + Ord + fmt::Display>(
    items: &[T],
    kind: EntityKind,
    id: impl Fn(&T) -> &I,
) -> Result<BTreeMap<I, usize>, RegistryError> {
    let mut out = BTreeMap::new();
    for (i, item) in items.iter().enumerate() {
        let key = id(item).clone();
        let text = key.to_string();
        if !is_valid_id(&text) {
            return Err(RegistryError::entity(
                kind,
                &text,
                RegistryErrorKind::Invalid(format!("`{text}` is not a valid identifier")),
            ));
        }
        if out.insert(key, i).is_some() {
            return Err(RegistryError::entity(kind, &text, RegistryErrorKind::DuplicateId(kind)));
        }
    }
    Ok(out)
}

/// Bounding box of a shape in unit coordinates, including stroke-free extremes of arcs.
pub fn shape_bounds(shape: &Shape) -> Rect {
    match shape {
        Shape::Line { points } => {
            let mut r = Rect { x0: f64::MAX, y0: f64::MAX, x1: f64::MIN, y1: f64::MIN };
            for p in points {
                r.x0 = r.x0.min(p.x);
                r.y0 = r.y0.min(p.y);
                r.x1 = r.x1.max(p.x);
                r.y1 = r.y1.max(p.y);
            }
            r
        }
        Shape::Dot { center } => Rect { x0: center.x, y0: center.y, x1: center.x, y1: center.y },
        Shape::Circle { center, radius } => Rect {
            x0: center.x - radius,
            y0: center.y - radius,
            x1: center.x + radius,
            y1: center.y + radius,
        },
        Shape::Arc { center, radius, start, end } => {
            let at = |deg: f64| {
                let rad = deg.to_radians();
                Point::new(center.x + radius * rad.cos(), center.y + radius * rad.sin())
            };
            let mut pts = vec![at(*start), at(*end)];
            let mut k = (start / 90.0).ceil() * 90.0;
            while k < *end {
                pts.push(at(k));
                k += 90.0;
            }
            shape_bounds(&Shape::Line { points: pts })
        }
    }
}

fn check_shape(shape: &Shape) -> Result<(), String> {
    let finite = shape.params().iter().all(|v| v.is_finite());
    if !finite {
        return Err("non-finite coordinate".into());
    }
    match shape {
        Shape::Line { points } if points.len() < 2 => return Err("a line needs two points".into()),
        Shape::Arc { radius, start, end, .. } => {
            if *radius <= 0.0 {
                return Err("arc radius must be positive".into());
            }
            if !(end > start && end - start <= 360.0) {
                return Err("arc must sweep a positive angle of at most 360 degrees".into());
            }
        }
        Shape::Circle { radius, .. } if *radius <= 0.0 => return Err("circle radius must be positive".into()),
        _ => {}
    }
    if !shape_bounds(shape).within_unit_box() {
        return Err("stroke leaves the bounding box".into());
    }
    Ok(())
}
