use vtt_core::composer::*;
use vtt_core::model::*;
use vtt_core::registry::GlyphError;
use vtt_core::semantics::lookup_concept;
use vtt_core::{constraint_of, refines, seed, Registry};

fn concept_name(g: &Glyph, r: &Registry) -> Option<String> {
    lookup_concept(g, r).map(|c| c.name.clone())
}

#[test]
fn placing_marks() {
    let r = seed::registry();
    let ch = place_mark(&Glyph::bare("hausdorff"), "center", Some(&"dot".into()), &r).unwrap();
    assert_eq!(concept_name(&ch, &r).as_deref(), Some("compact Hausdorff space"));

    let g = Glyph::bare("bar2");
    let again = place_mark(&g, "a", None, &r).unwrap();
    assert_eq!(canonicalize(&again, &r), canonicalize(&g, &r));

    let dot = place_mark(&g, "a", Some(&"dot".into()), &r).unwrap();
    let circle = place_mark(&dot, "a", Some(&"circle".into()), &r).unwrap();
    assert_eq!(constraint_of(&circle, &r).unwrap().to_strings(), ["in-a-"]);
}

#[test]
fn set_to_vector_space() {
    let r = seed::registry();
    let set = Glyph::bare("set");
    let group = apply_derivation(&set, &"group".into(), &r).unwrap();
    assert_eq!(concept_name(&group, &r).as_deref(), Some("group"));
    let abelian = apply_derivation(&group, &"abelian".into(), &r).unwrap();
    assert_eq!(concept_name(&abelian, &r).as_deref(), Some("abelian group"));
    assert_eq!(apply_derivation(&group, &"group".into(), &r), Err(GlyphError::AlreadyApplied("group".into())));

    let vs = apply_derivation(&abelian, &"vector-space".into(), &r).unwrap();
    assert_eq!(concept_name(&vs, &r).as_deref(), Some("vector space"));
    assert!(refines(&vs, &abelian, &r).unwrap());
    assert!(!refines(&abelian, &vs, &r).unwrap());

    let module = apply_derivation(&abelian, &"module".into(), &r).unwrap();
    assert_eq!(concept_name(&module, &r).as_deref(), Some("module"));
    // the module's scalar line stops short of the cap height
    let top = |g: &Glyph| {
        strokes_after_edits(g, &r)
            .unwrap()
            .into_iter()
            .find(|s| s.name == "action")
            .map(|s| match s.shape {
                Shape::Line { points } => points.iter().map(|p| p.y).fold(f64::MAX, f64::min),
                _ => panic!(),
            })
            .unwrap()
    };
    assert!(top(&module) > top(&vs));
    assert!(apply_derivation(&module, &"vector-space".into(), &r).is_err());
}

#[test]
fn group_strokes_follow_the_dots() {
    let r = seed::registry();
    let set = Glyph::bare("set");
    let group = set.clone().with_rule("group");
    let abelian = group.clone().with_rule("abelian");
    let names = |g: &Glyph| strokes_after_edits(g, &r).unwrap().into_iter().map(|s| (s.name, s.shape.keyword())).collect::<Vec<_>>();
    assert_eq!(names(&set), [("stem".into(), "line"), ("dot-l".into(), "dot"), ("dot-r".into(), "dot")]);
    assert_eq!(names(&group), [("stem".into(), "line"), ("dot-l".into(), "line"), ("dot-r".into(), "line")]);
    assert_eq!(names(&abelian), [("stem".into(), "line"), ("cross".into(), "line")]);
}

#[test]
fn topological_chain() {
    let r = seed::registry();
    let vs = Glyph::bare("set").with_rule("group").with_rule("abelian").with_rule("vector-space");
    let tvs = combine(&vs, &"hausdorff".into(), &r).unwrap();
    assert_eq!(concept_name(&tvs, &r).as_deref(), Some("topological vector space"));
    let banach = apply_derivation(&tvs, &"banach".into(), &r).unwrap();
    let hilbert = apply_derivation(&banach, &"hilbert".into(), &r).unwrap();
    let cstar = apply_derivation(&banach, &"c-star".into(), &r).unwrap();
    assert_eq!(concept_name(&banach, &r).as_deref(), Some("Banach space"));
    assert_eq!(concept_name(&hilbert, &r).as_deref(), Some("Hilbert space"));
    assert_eq!(concept_name(&cstar, &r).as_deref(), Some("C*-algebra"));
    let len = |g: &Glyph| constraint_of(g, &r).unwrap().len();
    assert!(len(&vs) < len(&tvs) && len(&tvs) < len(&banach) && len(&banach) < len(&hilbert));
    // banach needs a vector space somewhere in the glyph
    let bare = Glyph::bare("hausdorff");
    assert!(matches!(apply_derivation(&bare, &"banach".into(), &r), Err(GlyphError::Precondition { .. })));
}

#[test]
fn grothendieck_topos_is_irregular() {
    let r = seed::registry();
    let gt = combine_at(&Glyph::bare("category"), &"kolmogorov".into(), "geometric", &r).unwrap();
    assert!(is_irregular(&gt, &r));
    assert_eq!(concept_name(&gt, &r).as_deref(), Some("Grothendieck topos"));
    let tvs = combine(&Glyph::bare("set").with_rule("group"), &"hausdorff".into(), &r).unwrap();
    assert!(!is_irregular(&tvs, &r));
}

#[test]
fn abbreviation() {
    let r = seed::registry();
    let topos = Glyph::bare("category").with_rule("elementary-topos");
    let short = abbreviate(&topos, &r).unwrap();
    assert!(short.abbreviated);
    assert_eq!(concept_name(&short, &r), concept_name(&topos, &r));
    assert_eq!(expand(&topos, &r).unwrap(), topos);
    assert_eq!(expand(&short, &r).unwrap(), topos);
    assert_eq!(abbreviate(&Glyph::bare("set"), &r), Err(GlyphError::NoLimitFile("set".into())));
}

#[test]
fn construction_order_does_not_matter() {
    let r = seed::registry();
    let marks_first = Glyph::bare("set").with_mark("cardinality", "dot").with_mark("basepoint", "circle");
    let marks_first = apply_derivation(&apply_derivation(&marks_first, &"group".into(), &r).unwrap(), &"abelian".into(), &r).unwrap();
    let rules_first = apply_derivation(&Glyph::bare("set"), &"group".into(), &r).unwrap();
    let rules_first = apply_derivation(&rules_first, &"abelian".into(), &r).unwrap();
    let rules_first = place_mark(&rules_first, "basepoint", Some(&"circle".into()), &r).unwrap();
    let rules_first = place_mark(&rules_first, "cardinality", Some(&"dot".into()), &r).unwrap();
    assert_eq!(canonicalize(&marks_first, &r), canonicalize(&rules_first, &r));
    assert_eq!(canonical_id(&marks_first, &r), canonical_id(&rules_first, &r));
}

#[test]
fn region_expansion() {
    let r = seed::registry();
    let vs = Glyph::bare("set").with_rule("group").with_rule("abelian").with_rule("vector-space");
    let tvs = combine(&vs, &"hausdorff".into(), &r).unwrap();
    let big = expand_region(&tvs, "algebraic", 1.5, &r).unwrap();
    assert_eq!(constraint_of(&big, &r), constraint_of(&tvs, &r));
    let rects = vtt_core::registry::region_rects(r.radical(&"hausdorff".into()).unwrap(), &big);
    let alg = rects.iter().find(|(n, _)| *n == "algebraic").unwrap().1;
    assert!((alg.width() - 0.42).abs() < 1e-9);
    assert_eq!(canonicalize(&expand_region(&tvs, "algebraic", 1.0, &r).unwrap(), &r), canonicalize(&tvs, &r));
    assert!(matches!(expand_region(&tvs, "algebraic", 2.0, &r), Err(GlyphError::RegionOverlap { .. })));
}

#[test]
fn canonical_ids() {
    let r = seed::registry();
    assert_eq!(canonical_id(&Glyph::bare("set"), &r), "set");
    let ch = canonical_id(&Glyph::bare("hausdorff").with_mark("center", "dot"), &r);
    assert!(ch.starts_with("hausdorff-") && ch.len() == "hausdorff-".len() + 12, "{ch}");
}
