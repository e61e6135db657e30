//! Registry lints: meaning-map functionality and precedence, near-injectivity,
//! coverage of the basic radical table, and information density.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composer::{self, canonical_text};
use crate::model::*;
use crate::registry::{GlyphError, Registry};
use crate::semantics::constraint_of;

/// Keys of the basic radical table a complete registry covers.
pub const TABLE1_KEYS: [&str; 23] = [
    "set",
    "kolmogorov-space",
    "hausdorff-space",
    "ring-field-algebra",
    "module-vector-space",
    "pairs-extensions",
    "group",
    "topological-group",
    "lie-algebra",
    "manifold-bundle",
    "classical-variety",
    "sheaf",
    "dynamical-system",
    "process",
    "topological-vector-space",
    "cw-complex",
    "simplicial-set",
    "category",
    "globular-set",
    "enriched-category",
    "order-lattice",
    "deduction-system",
    "lambda-calculus",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: String,
    pub subjects: Vec<String>,
    pub message: String,
}

impl Finding {
    fn new(severity: Severity, code: &str, subjects: Vec<String>, message: String) -> Self {
        Finding { severity, code: code.to_owned(), subjects, message }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LintReport {
    pub findings: Vec<Finding>,
    /// Canonical glyph text of every bound glyph to its density.
    pub density_table: BTreeMap<String, f64>,
}

impl LintReport {
    fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }

    fn finish(mut self) -> Self {
        self.findings.sort();
        self.findings.dedup();
        self
    }

    pub fn merge(mut self, other: LintReport) -> Self {
        self.findings.extend(other.findings);
        self.density_table.extend(other.density_table);
        self.finish()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.findings.iter().filter(|f| f.severity == severity).count()
    }

    pub fn with_code<'a>(&'a self, code: &'a str) -> impl Iterator<Item = &'a Finding> + 'a {
        self.findings.iter().filter(move |f| f.code == code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per finding, then the density table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!("{}[{}]: {}", f.severity, f.code, f.message));
            if !f.subjects.is_empty() {
                out.push_str(&format!(" ({})", f.subjects.join(", ")));
            }
            out.push('\n');
        }
        if !self.density_table.is_empty() {
            out.push_str("density:\n");
            for (g, d) in &self.density_table {
                out.push_str(&format!("  {d:.4}  {g}\n"));
            }
        }
        out.push_str(&format!(
            "{} error(s), {} warning(s), {} info\n",
            self.count(Severity::Error),
            self.count(Severity::Warning),
            self.count(Severity::Info)
        ));
        out
    }
}

/// Every lint, plus the density table of bound glyphs.
pub fn validate(registry: &Registry) -> LintReport {
    let mut report = check_meaning_map(registry).merge(check_universality(registry));
    for b in registry.bindings() {
        if let Ok(d) = density(&b.glyph, registry) {
            report.density_table.insert(canonical_text(&b.glyph, registry), d);
        }
    }
    report
}

/// Functionality of the meaning map, cryptomorphism precedence and coverage of concepts.
pub fn check_meaning_map(registry: &Registry) -> LintReport {
    let mut report = LintReport::default();
    let bindings = registry.bindings();

    for (key, ix) in registry.meaning_map() {
        let concepts: BTreeSet<&ConceptId> = ix.iter().map(|&i| &bindings[i].concept).collect();
        if concepts.len() > 1 {
            let names: Vec<String> = concepts.iter().map(|c| c.to_string()).collect();
            report.push(Finding::new(
                Severity::Error,
                "overload",
                names.clone(),
                format!("glyph {} is bound to {} concepts: {}", canonical_text(key, registry), names.len(), names.join(", ")),
            ));
        }
    }

    let mut groups: BTreeMap<&str, Vec<&Binding>> = BTreeMap::new();
    let mut per_concept: BTreeMap<&ConceptId, BTreeSet<Glyph>> = BTreeMap::new();
    for b in bindings {
        per_concept.entry(&b.concept).or_default().insert(composer::semantic_key(&b.glyph, registry));
        if let Some(g) = registry.concept(&b.concept).and_then(|c| c.cryptomorphism_group.as_deref()) {
            groups.entry(g).or_default().push(b);
        }
    }
    for (group, bs) in &groups {
        let concepts: BTreeSet<String> = bs.iter().map(|b| b.concept.to_string()).collect();
        let mut subjects = vec![group.to_string()];
        subjects.extend(concepts);
        let with_precedence = bs.iter().filter(|b| b.precedence).count();
        if with_precedence == 0 {
            report.push(Finding::new(
                Severity::Error,
                "missing-precedence",
                subjects,
                format!("cryptomorphism group `{group}` has {} glyph(s) but none is marked precedence", bs.len()),
            ));
        } else if with_precedence > 1 {
            report.push(Finding::new(
                Severity::Error,
                "multiple-precedence",
                subjects,
                format!("cryptomorphism group `{group}` marks {with_precedence} glyphs as precedence"),
            ));
        }
    }

    for c in registry.concepts() {
        match per_concept.get(&c.id) {
            None => report.push(Finding::new(
                Severity::Warning,
                "unbound-concept",
                vec![c.id.to_string()],
                format!("concept `{}` ({}) has no glyph", c.id, c.name),
            )),
            Some(glyphs) if glyphs.len() > 1 && c.cryptomorphism_group.is_none() => report.push(Finding::new(
                Severity::Warning,
                "multiple-glyphs",
                vec![c.id.to_string()],
                format!(
                    "concept `{}` has {} distinct glyphs but no cryptomorphism group",
                    c.id,
                    glyphs.len()
                ),
            )),
            _ => {}
        }
    }

    let distinct = registry.meaning_map().count();
    if distinct > 0 {
        let bound = per_concept.len();
        report.push(Finding::new(
            Severity::Info,
            "injectivity",
            Vec::new(),
            format!(
                "{bound} bound concept(s) over {distinct} distinct glyph(s): ratio {:.3}",
                bound as f64 / distinct as f64
            ),
        ));
    }

    for b in bindings {
        if composer::is_irregular(&b.glyph, registry) {
            report.push(Finding::new(
                Severity::Info,
                "irregular-glyph",
                vec![b.concept.to_string()],
                format!("glyph {} embeds a sub-glyph outside the algebraic region", canonical_text(&b.glyph, registry)),
            ));
        }
    }
    report.finish()
}

/// Presence of the basic radical table and lineage of structure radicals.
pub fn check_universality(registry: &Registry) -> LintReport {
    let mut report = LintReport::default();
    let present: BTreeSet<&str> = registry.radicals().iter().filter_map(|r| r.table1_key.as_deref()).collect();
    let covered = TABLE1_KEYS.iter().filter(|k| present.contains(**k)).count();
    report.push(Finding::new(
        Severity::Info,
        "table1-present",
        Vec::new(),
        format!("{covered} of {} basic radicals present", TABLE1_KEYS.len()),
    ));
    for key in TABLE1_KEYS.iter().filter(|k| !present.contains(**k)) {
        report.push(Finding::new(
            Severity::Info,
            "table1-absent",
            vec![key.to_string()],
            format!("basic radical `{key}` is missing"),
        ));
    }

    let anchors: BTreeSet<&RadicalId> = registry
        .radicals()
        .iter()
        .filter(|r| matches!(r.table1_key.as_deref(), Some("set" | "category")))
        .map(|r| &r.id)
        .collect();
    for r in registry.radicals().iter().filter(|r| r.family == Family::Structure) {
        if !registry.ancestry(&r.id).iter().any(|a| anchors.contains(a)) {
            report.push(Finding::new(
                Severity::Warning,
                "orphan-radical",
                vec![r.id.to_string()],
                format!("structure radical `{}` has no lineage to the set or category radical", r.id),
            ));
        }
    }
    report.finish()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Glyph(#[from] GlyphError),
    #[error("glyph has no strokes")]
    NoStrokes,
}

/// Bits of constraint information per stroke.
///
/// Each marked region across the glyph tree carries `log2(|marks| + 1)` bits and
/// each distinct rule-added literal one bit. Strokes count after edits,
/// including limit-file strokes and the strokes of embedded sub-glyphs, so
/// abbreviation and expansion leave the score unchanged.
pub fn density(glyph: &Glyph, registry: &Registry) -> Result<f64, DensityError> {
    constraint_of(glyph, registry)?;
    let bits_per_mark = ((registry.marks().len() + 1) as f64).log2();
    let mut rule_literals: BTreeSet<Literal> = BTreeSet::new();
    let (marked, strokes) = tally(glyph, registry, &mut rule_literals)?;
    if strokes == 0 {
        return Err(DensityError::NoStrokes);
    }
    Ok((marked as f64 * bits_per_mark + rule_literals.len() as f64) / strokes as f64)
}

fn tally(glyph: &Glyph, registry: &Registry, rule_literals: &mut BTreeSet<Literal>) -> Result<(usize, usize), GlyphError> {
    let canon = composer::canonicalize(glyph, registry);
    let mut strokes = composer::strokes_after_edits(&canon, registry)?.len();
    let mut marked = 0;
    for e in &canon.assignment {
        match &e.fill {
            Fill::Absent => {}
            Fill::Mark(_) => marked += 1,
            Fill::Glyph(sub) => {
                let (m, s) = tally(sub, registry, rule_literals)?;
                marked += m;
                strokes += s;
            }
        }
    }
    for r in &canon.derivations {
        rule_literals.extend(registry.rule_of(r)?.adds.iter().cloned());
    }
    Ok((marked, strokes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::seed;

    #[test]
    fn seed_is_clean() {
        let report = validate(&seed::registry());
        assert!(!report.has_errors(), "{}", report.to_text());
        assert_eq!(report.with_code("table1-absent").count(), 0);
        assert_eq!(report.with_code("orphan-radical").count(), 0);
    }

    #[test]
    fn density_of_set_glyphs() {
        let r = seed::registry();
        assert_eq!(density(&Glyph::bare("set"), &r).unwrap(), 0.0);
        let both = Glyph::bare("set").with_mark("cardinality", "dot").with_mark("basepoint", "circle");
        let oracle = 2.0 * 3f64.log2() / 3.0;
        assert!((density(&both, &r).unwrap() - oracle).abs() < 1e-12);
        assert!((oracle - 1.0566).abs() < 1e-4);
    }

    #[test]
    fn density_grows_with_marks() {
        let r = Registry::new(membership_bar(7)).unwrap();
        let one = Glyph::bare("bar").with_mark("r0", "dot");
        let mut all = Glyph::bare("bar");
        for i in 0..7 {
            all = all.with_mark(&format!("r{i}"), "circle");
        }
        assert!(density(&all, &r).unwrap() > density(&one, &r).unwrap());
    }

    #[test]
    fn missing_precedence_is_an_error() {
        let mut d = membership_bar(2);
        let mut lattice = concept("lattice");
        lattice.cryptomorphism_group = Some("lattice-defs".into());
        d.concepts.push(lattice);
        d.bindings.push(Binding { glyph: Glyph::bare("bar").with_mark("r0", "dot"), concept: "lattice".into(), precedence: true });
        d.bindings.push(Binding { glyph: Glyph::bare("bar").with_mark("r1", "dot"), concept: "lattice".into(), precedence: false });
        let r = Registry::new(d.clone()).unwrap();
        assert!(!check_meaning_map(&r).has_errors());
        d.bindings[0].precedence = false;
        let report = check_meaning_map(&Registry::new(d.clone()).unwrap());
        assert_eq!(report.errors().count(), 1);
        assert_eq!(report.errors().next().unwrap().code, "missing-precedence");
        d.bindings[0].precedence = true;
        d.bindings[1].precedence = true;
        let report = check_meaning_map(&Registry::new(d).unwrap());
        assert_eq!(report.errors().next().unwrap().code, "multiple-precedence");
    }

    #[test]
    fn overload_is_reported_from_lenient_registry() {
        let mut d = membership_bar(2);
        d.concepts.push(concept("a"));
        d.concepts.push(concept("b"));
        let g = Glyph::bare("bar").with_mark("r0", "dot");
        d.bindings.push(Binding { glyph: g.clone(), concept: "a".into(), precedence: false });
        d.bindings.push(Binding { glyph: g, concept: "b".into(), precedence: false });
        let report = check_meaning_map(&Registry::new_lenient(d).unwrap());
        assert_eq!(report.errors().count(), 1);
        assert_eq!(report.errors().next().unwrap().code, "overload");
    }

    #[test]
    fn universality_flags_missing_and_orphans() {
        let mut d = seed::definitions();
        d.bindings.retain(|b| b.glyph.radical.as_str() != "lambda");
        d.rules.retain(|r| r.source != RuleSource::Radical("lambda".into()));
        d.radicals.retain(|r| r.table1_key.as_deref() != Some("lambda-calculus"));
        let mut orphan = d.radicals.iter().find(|r| r.id.as_str() == "set").unwrap().clone();
        orphan.id = "loner".into();
        orphan.table1_key = None;
        d.radicals.push(orphan);
        let report = check_universality(&Registry::new(d).unwrap());
        let absent: Vec<_> = report.with_code("table1-absent").collect();
        assert_eq!(absent.len(), 1);
        assert_eq!(absent[0].subjects, ["lambda-calculus"]);
        let orphans: Vec<_> = report.with_code("orphan-radical").collect();
        assert_eq!(orphans.len(), 1);
        assert_eq!(orphans[0].subjects, ["loner"]);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = validate(&seed::registry()).to_json();
        let b = validate(&seed::registry()).to_json();
        assert_eq!(a, b);
    }
}
