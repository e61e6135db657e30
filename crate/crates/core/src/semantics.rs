//! Logical reading of absence-loaded glyphs.
//!
//! A glyph denotes a conjunction of signed constraints: one literal per marked
//! region, the literals of every applied derivation rule and of every embedded
//! sub-glyph, plus the radical's baseline. Vacant regions contribute nothing.
//! Over a [`UniverseModel`] the conjunction picks out the carrier elements that
//! satisfy every literal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composer;
use crate::model::*;
use crate::registry::{GlyphError, Registry};

/// Default upper bound on the size of an enumerated family.
pub const DEFAULT_ENUMERATION_CEILING: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Glyph(#[from] GlyphError),
    #[error("model has no valuation for constraint `{0}`")]
    MissingValuation(ConstraintId),
    #[error("glyphs come from unrelated radical lineages and are unordered")]
    Unordered,
    #[error("literal `{literal}` is not expressible on radical `{radical}`: {reason}")]
    Unexpressible { literal: String, radical: RadicalId, reason: String },
    #[error("cannot enumerate a family over an empty region schema")]
    EmptySchema,
    #[error("family of {} glyphs exceeds the enumeration ceiling of {ceiling}", count.map_or("more than 2^64".to_owned(), |c| c.to_string()))]
    EnumerationRefused { count: Option<u64>, ceiling: u64 },
}

/// A set of signed constraints with no constraint carrying both signs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiteralConjunction {
    literals: BTreeMap<ConstraintId, Polarity>,
}

impl LiteralConjunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a conjunction, failing on a constraint that appears with both signs.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self, GlyphError> {
        let mut out = Self::new();
        for l in lits {
            out.insert(l)?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, lit: Literal) -> Result<(), GlyphError> {
        match self.literals.get(&lit.constraint) {
            Some(&sign) if sign != lit.sign => Err(GlyphError::LiteralConflict(lit.constraint)),
            _ => {
                self.literals.insert(lit.constraint, lit.sign);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &LiteralConjunction) -> Result<(), GlyphError> {
        for lit in other.iter() {
            self.insert(lit)?;
        }
        Ok(())
    }

    pub fn sign_of(&self, constraint: &ConstraintId) -> Option<Polarity> {
        self.literals.get(constraint).copied()
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.sign_of(&lit.constraint) == Some(lit.sign)
    }

    pub fn is_superset(&self, other: &LiteralConjunction) -> bool {
        other.iter().all(|l| self.contains(&l))
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().map(|(c, &sign)| Literal { constraint: c.clone(), sign })
    }

    pub fn constraints(&self) -> impl Iterator<Item = &ConstraintId> {
        self.literals.keys()
    }

    /// True if element membership (`member(constraint)`) satisfies every literal.
    pub fn satisfied_by(&self, mut member: impl FnMut(&ConstraintId) -> bool) -> bool {
        self.literals.iter().all(|(c, &sign)| member(c) == (sign == Polarity::Positive))
    }

    /// Literals rendered as `name+` / `name-`, in constraint order.
    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(|l| l.to_string()).collect()
    }
}

impl fmt::Display for LiteralConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl Serialize for LiteralConjunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|l| l.to_string()))
    }
}

impl<'de> Deserialize<'de> for LiteralConjunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let mut out = LiteralConjunction::new();
        for s in raw {
            let lit = parse_literal(&s).ok_or_else(|| serde::de::Error::custom(format!("bad literal `{s}`")))?;
            out.insert(lit).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// Parses `name+` or `name-`.
pub fn parse_literal(s: &str) -> Option<Literal> {
    let (body, sign) = match s.chars().last()? {
        '+' => (&s[..s.len() - 1], Polarity::Positive),
        '-' => (&s[..s.len() - 1], Polarity::Negative),
        _ => return None,
    };
    is_valid_id(body).then(|| Literal::new(body, sign))
}

/// The literal conjunction a glyph asserts.
pub fn constraint_of(glyph: &Glyph, registry: &Registry) -> Result<LiteralConjunction, GlyphError> {
    let radical = registry.radical_of(glyph)?;
    let mut out = LiteralConjunction::from_literals(radical.baseline.iter().cloned())?;
    for entry in &glyph.assignment {
        if radical.schema.region(&entry.region).is_none() {
            return Err(GlyphError::UnknownRegion { radical: radical.id.clone(), region: entry.region.clone() });
        }
    }
    for region in &radical.schema.regions {
        match glyph.fill(&region.name) {
            None | Some(Fill::Absent) => {}
            Some(Fill::Mark(m)) => {
                let mark = registry.mark(m).ok_or_else(|| GlyphError::UnknownMark(m.clone()))?;
                out.insert(Literal { constraint: region.constraint.clone(), sign: mark.polarity })?;
            }
            Some(Fill::Glyph(sub)) => out.merge(&constraint_of(sub, registry)?)?,
        }
    }
    for id in &glyph.derivations {
        let rule = registry.rule_of(id)?;
        for lit in &rule.adds {
            out.insert(lit.clone())?;
        }
    }
    Ok(out)
}

/// Carrier elements satisfying every literal of `lits`.
pub fn denote_conjunction(
    lits: &LiteralConjunction,
    model: &UniverseModel,
) -> Result<BTreeSet<String>, SemanticsError> {
    for c in lits.constraints() {
        if !model.valuation.contains_key(c) {
            return Err(SemanticsError::MissingValuation(c.clone()));
        }
    }
    Ok(model
        .carrier
        .iter()
        .filter(|x| lits.satisfied_by(|c| model.valuation[c].contains(*x)))
        .cloned()
        .collect())
}

pub fn denote(
    glyph: &Glyph,
    model: &UniverseModel,
    registry: &Registry,
) -> Result<BTreeSet<String>, SemanticsError> {
    denote_conjunction(&constraint_of(glyph, registry)?, model)
}

/// Whether `g1` refines `g2` (its literal set contains that of `g2`).
///
/// Glyphs whose radical lineages share no root are unordered and yield
/// [`SemanticsError::Unordered`].
pub fn refines(g1: &Glyph, g2: &Glyph, registry: &Registry) -> Result<bool, SemanticsError> {
    let l1 = constraint_of(g1, registry)?;
    let l2 = constraint_of(g2, registry)?;
    if registry.glyph_lineage(g1).is_disjoint(&registry.glyph_lineage(g2)) {
        return Err(SemanticsError::Unordered);
    }
    Ok(l1.is_superset(&l2))
}

/// Gestalt equivalence: equal canonical forms.
pub fn equivalent(g1: &Glyph, g2: &Glyph, registry: &Registry) -> bool {
    composer::canonicalize(g1, registry) == composer::canonicalize(g2, registry)
}

/// Every assignment of a mark vocabulary (or absence) to the regions of a schema.
#[derive(Clone, Debug)]
pub struct GlyphFamily {
    radical: RadicalId,
    regions: Vec<String>,
    marks: Vec<MarkId>,
    count: u64,
}

pub fn enumerate_family(radical: &Radical, marks: &[Mark]) -> Result<GlyphFamily, SemanticsError> {
    enumerate_family_with_ceiling(radical, marks, DEFAULT_ENUMERATION_CEILING)
}

pub fn enumerate_family_with_ceiling(
    radical: &Radical,
    marks: &[Mark],
    ceiling: u64,
) -> Result<GlyphFamily, SemanticsError> {
    if radical.schema.is_empty() {
        return Err(SemanticsError::EmptySchema);
    }
    let base = marks.len() as u64 + 1;
    let count = u32::try_from(radical.schema.len()).ok().and_then(|n| base.checked_pow(n));
    match count {
        Some(c) if c <= ceiling => Ok(GlyphFamily {
            radical: radical.id.clone(),
            regions: radical.schema.regions.iter().map(|r| r.name.clone()).collect(),
            marks: marks.iter().map(|m| m.id.clone()).collect(),
            count: c,
        }),
        _ => Err(SemanticsError::EnumerationRefused { count, ceiling }),
    }
}

impl GlyphFamily {
    /// Exact number of glyphs, `(|marks| + 1)^regions`.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Lazily yields the glyphs in mixed-radix order, first region most significant.
    /// Each glyph stores only its non-absent entries, in schema order.
    pub fn iter(&self) -> impl Iterator<Item = Glyph> + '_ {
        (0..self.count).map(move |k| self.nth_glyph(k))
    }

    fn nth_glyph(&self, mut k: u64) -> Glyph {
        let base = self.marks.len() as u64 + 1;
        let mut digits = vec![0u64; self.regions.len()];
        for d in digits.iter_mut().rev() {
            *d = k % base;
            k /= base;
        }
        let mut g = Glyph::bare(self.radical.clone());
        for (region, d) in self.regions.iter().zip(digits) {
            if d > 0 {
                g.assignment.push(RegionFill {
                    region: region.clone(),
                    fill: Fill::Mark(self.marks[(d - 1) as usize].clone()),
                });
            }
        }
        g
    }
}

/// Builds the canonical glyph on `radical` whose literal set is exactly `target`.
///
/// Literals are homed on regions first; whatever no region can hold must be
/// contributed by derivation rules applicable to the radical.
pub fn invert(
    target: &LiteralConjunction,
    radical: &RadicalId,
    registry: &Registry,
) -> Result<Glyph, SemanticsError> {
    let rad = registry.radical(radical).ok_or_else(|| GlyphError::UnknownRadical(radical.clone()))?;
    let unexpressible = |lit: &Literal, reason: &str| SemanticsError::Unexpressible {
        literal: lit.to_string(),
        radical: radical.clone(),
        reason: reason.to_owned(),
    };

    let mut remaining: Vec<Literal> = Vec::new();
    let baseline = LiteralConjunction::from_literals(rad.baseline.iter().cloned())?;
    for lit in baseline.iter() {
        if !target.contains(&lit) {
            return Err(unexpressible(&lit, "the radical asserts it but the target does not"));
        }
    }
    for lit in target.iter() {
        if !baseline.contains(&lit) {
            remaining.push(lit);
        }
    }

    let home_of = |lit: &Literal| -> Option<(&Region, &Mark)> {
        let mark = registry.mark_for(lit.sign)?;
        rad.schema
            .regions
            .iter()
            .find(|r| r.constraint == lit.constraint && registry.check_mark_admissible(r, &mark.id).is_ok())
            .map(|r| (r, mark))
    };

    let mut uncovered: BTreeSet<Literal> = remaining.iter().filter(|l| home_of(l).is_none()).cloned().collect();
    let mut chosen: Vec<&DerivationRule> = Vec::new();
    loop {
        let pick = registry.rules().iter().find(|rule| {
            !chosen.iter().any(|c| c.id == rule.id)
                && registry.check_rule_source(rule, rad).is_ok()
                && rule.requires.iter().all(|r| chosen.iter().any(|c| &c.id == r))
                && rule.adds.iter().all(|l| target.contains(l))
                && rule.adds.iter().any(|l| uncovered.contains(l))
        });
        match pick {
            Some(rule) => {
                for l in &rule.adds {
                    uncovered.remove(l);
                }
                chosen.push(rule);
            }
            None => break,
        }
    }
    if let Some(lit) = uncovered.iter().next() {
        return Err(unexpressible(lit, "no region or applicable rule carries it"));
    }

    let rule_covered = |lit: &Literal| chosen.iter().any(|r| r.adds.contains(lit));
    let mut glyph = Glyph::bare(radical.clone());
    for lit in &remaining {
        if rule_covered(lit) {
            continue;
        }
        let (region, mark) = home_of(lit).expect("uncovered literals were rejected above");
        if glyph.fill(&region.name).is_some() {
            return Err(unexpressible(lit, "its region already carries another literal"));
        }
        glyph.set_fill(&region.name, Fill::Mark(mark.id.clone()));
    }
    glyph.derivations = chosen.iter().map(|r| r.id.clone()).collect();
    registry.validate_glyph(&glyph)?;
    let glyph = composer::canonicalize(&glyph, registry);
    debug_assert_eq!(constraint_of(&glyph, registry).ok().as_ref(), Some(target));
    Ok(glyph)
}

/// The concept the meaning map assigns to a glyph's canonical form, if any.
///
/// Visual-only state (abbreviation, region expansion) is ignored.
pub fn lookup_concept<'r>(glyph: &Glyph, registry: &'r Registry) -> Option<&'r Concept> {
    let key = composer::semantic_key(glyph, registry);
    let bindings: Vec<&Binding> = registry.bindings_for_key(&key).collect();
    let chosen = bindings.iter().find(|b| b.precedence).or_else(|| bindings.first())?;
    registry.concept(&chosen.concept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn bar2() -> Registry {
        Registry::new(membership_bar(2)).unwrap()
    }

    /// carrier {1..6}, r0 ↦ {1,2,3}, r1 ↦ {3,4,5}
    fn six_model() -> UniverseModel {
        UniverseModel::new(["1", "2", "3", "4", "5", "6"])
            .with_valuation("c0", ["1", "2", "3"])
            .unwrap()
            .with_valuation("c1", ["3", "4", "5"])
            .unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constraint_of_reads_marks() {
        let r = bar2();
        let both = Glyph::bare("bar").with_mark("r0", "dot").with_mark("r1", "dot");
        assert_eq!(constraint_of(&both, &r).unwrap().to_strings(), ["c0+", "c1+"]);
        assert!(constraint_of(&Glyph::bare("bar"), &r).unwrap().is_empty());
        let a_minus_b = Glyph::bare("bar").with_mark("r0", "dot").with_mark("r1", "circle");
        assert_eq!(constraint_of(&a_minus_b, &r).unwrap().to_strings(), ["c0+", "c1-"]);
    }

    #[test]
    fn constraint_of_rejects_unknown_ids() {
        let r = bar2();
        let g = Glyph::bare("bar").with_mark("zz", "dot");
        assert!(matches!(constraint_of(&g, &r), Err(GlyphError::UnknownRegion { .. })));
        let g = Glyph::bare("bar").with_mark("r0", "star");
        assert_eq!(constraint_of(&g, &r), Err(GlyphError::UnknownMark("star".into())));
    }

    #[test]
    fn denote_worked_example() {
        let r = bar2();
        let m = six_model();
        let both = Glyph::bare("bar").with_mark("r0", "dot").with_mark("r1", "dot");
        assert_eq!(denote(&both, &m, &r).unwrap(), set(&["3"]));
        assert_eq!(denote(&Glyph::bare("bar"), &m, &r).unwrap(), m.carrier);
        let a_minus_b = Glyph::bare("bar").with_mark("r0", "dot").with_mark("r1", "circle");
        assert_eq!(denote(&a_minus_b, &m, &r).unwrap(), set(&["1", "2"]));
    }

    #[test]
    fn denote_needs_valuations() {
        let r = bar2();
        let m = UniverseModel::new(["1"]);
        let g = Glyph::bare("bar").with_mark("r0", "dot");
        assert_eq!(denote(&g, &m, &r), Err(SemanticsError::MissingValuation("c0".into())));
    }

    #[test]
    fn refinement_examples() {
        let r = bar2();
        let a = Glyph::bare("bar").with_mark("r0", "dot");
        let b = Glyph::bare("bar").with_mark("r1", "dot");
        assert!(refines(&a, &a, &r).unwrap());
        assert!(!refines(&a, &b, &r).unwrap());
        assert!(!refines(&b, &a, &r).unwrap());
        assert!(refines(&a, &Glyph::bare("bar"), &r).unwrap());
    }

    #[test]
    fn equivalence_ignores_absent_entries_and_order() {
        let r = bar2();
        let a = Glyph::bare("bar").with_mark("r0", "dot");
        let mut a2 = Glyph::bare("bar");
        a2.set_fill("r1", Fill::Absent);
        a2.set_fill("r0", Fill::Mark("dot".into()));
        assert!(equivalent(&a, &a2, &r));
        let na = Glyph::bare("bar").with_mark("r0", "circle");
        assert!(!equivalent(&a, &na, &r));
    }

    #[test]
    fn family_counts() {
        let reg = Registry::new(membership_bar(7)).unwrap();
        let fam = enumerate_family(&reg.radicals()[0], reg.marks()).unwrap();
        assert_eq!(fam.count(), 2187);
        let reg1 = Registry::new(membership_bar(1)).unwrap();
        let fam = enumerate_family(&reg1.radicals()[0], &[]).unwrap();
        assert_eq!(fam.count(), 1);
        assert_eq!(fam.iter().collect::<Vec<_>>(), vec![Glyph::bare("bar")]);
    }

    #[test]
    fn family_ceiling_refuses() {
        let reg = Registry::new(membership_bar(7)).unwrap();
        let err = enumerate_family_with_ceiling(&reg.radicals()[0], reg.marks(), 1000).unwrap_err();
        assert_eq!(err, SemanticsError::EnumerationRefused { count: Some(2187), ceiling: 1000 });
        let empty = Registry::new(membership_bar(0)).unwrap();
        assert_eq!(enumerate_family(&empty.radicals()[0], empty.marks()).unwrap_err(), SemanticsError::EmptySchema);
    }

    #[test]
    fn invert_examples() {
        let r = bar2();
        let t = LiteralConjunction::from_literals([Literal::pos("c0"), Literal::neg("c1")]).unwrap();
        let g = invert(&t, &"bar".into(), &r).unwrap();
        assert_eq!(g, Glyph::bare("bar").with_mark("r0", "dot").with_mark("r1", "circle"));
        let g = invert(&LiteralConjunction::new(), &"bar".into(), &r).unwrap();
        assert_eq!(g, Glyph::bare("bar"));
    }

    #[test]
    fn invert_rejects_homeless_literal() {
        let mut d = membership_bar(2);
        d.constraints.push(PropertyConstraint {
            id: "c9".into(),
            name: "elsewhere".into(),
            statement: String::new(),
            negatable: true,
        });
        let r = Registry::new(d).unwrap();
        let t = LiteralConjunction::from_literals([Literal::pos("c9")]).unwrap();
        assert!(matches!(invert(&t, &"bar".into(), &r), Err(SemanticsError::Unexpressible { .. })));
    }

    #[test]
    fn literal_conjunction_rejects_both_signs() {
        let err = LiteralConjunction::from_literals([Literal::pos("a"), Literal::neg("a")]).unwrap_err();
        assert_eq!(err, GlyphError::LiteralConflict("a".into()));
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(parse_literal("finite-"), Some(Literal::neg("finite")));
        assert_eq!(parse_literal("in-a+"), Some(Literal::pos("in-a")));
        assert_eq!(parse_literal("x"), None);
        assert_eq!(parse_literal("+"), None);
    }
}
