use std::collections::BTreeSet;

use vtt_core::compose::known_glyphs;
use vtt_core::composer::abbreviate;
use vtt_core::dsl::parse_expression;
use vtt_core::interchange::{self, InterchangeError};
use vtt_core::model::*;
use vtt_core::render::*;
use vtt_core::{enumerate_family, resolve_glyph, seed, Registry};

#[test]
fn set_radical_geometry() {
    let r = seed::registry();
    let g = layout(&Glyph::bare("set"), &r, 100).unwrap();
    let strokes: Vec<_> = g.strokes().collect();
    let vertical = strokes
        .iter()
        .filter(|(_, p)| matches!(p, Path::Polyline { points } if points.len() == 2 && points[0].x == points[1].x))
        .count();
    let dots = strokes.iter().filter(|(_, p)| matches!(p, Path::Disc { .. })).count();
    assert_eq!((strokes.len(), vertical, dots), (3, 1, 2));
}

#[test]
fn compact_hausdorff_has_a_closed_circle_in_the_center() {
    let r = seed::registry();
    let plain = layout(&Glyph::bare("hausdorff"), &r, 100).unwrap();
    let compact = layout(&resolve_glyph("compact-hausdorff", &r).unwrap(), &r, 100).unwrap();
    assert_eq!(plain.strokes().count(), compact.strokes().count());
    let marks: Vec<_> = compact.marks().collect();
    assert_eq!(marks.len(), 1);
    assert_eq!(marks[0].0, MarkShape::Dot);
    assert_eq!(marks[0].1, QPoint { x: Q(50_000), y: Q(50_000) });
    assert!(glyph_svg(&resolve_glyph("compact-hausdorff", &r).unwrap(), &r, 100).unwrap().contains(r#"data-shape="dot""#));
}

#[test]
fn abbreviated_topos_omits_the_limit_file() {
    let r = seed::registry();
    let topos = resolve_glyph("elementary-topos", &r).unwrap();
    let full: BTreeSet<String> = layout(&topos, &r, 100).unwrap().strokes().map(|(n, _)| n.to_owned()).collect();
    let short: BTreeSet<String> =
        layout(&abbreviate(&topos, &r).unwrap(), &r, 100).unwrap().strokes().map(|(n, _)| n.to_owned()).collect();
    let dropped: Vec<&String> = full.difference(&short).collect();
    assert_eq!(dropped, ["closed", "finite", "limit"]);
}

#[test]
fn svg_is_deterministic() {
    let a = seed::registry();
    let b = seed::registry();
    for (id, g) in known_glyphs(&a) {
        assert_eq!(glyph_svg(&g, &a, 96).unwrap(), glyph_svg(&g, &b, 96).unwrap(), "{id}");
    }
}

#[test]
fn enumerated_glyphs_render_distinctly() {
    let r = seed::registry();
    let fam = enumerate_family(r.radical(&"order".into()).unwrap(), r.marks()).unwrap();
    let docs: BTreeSet<String> = fam.iter().map(|g| glyph_svg(&g, &r, 64).unwrap()).collect();
    assert_eq!(docs.len(), 27);
}

#[test]
fn doubling_the_size_doubles_coordinates() {
    let r = seed::registry();
    let g = resolve_glyph("priestley-space", &r).unwrap();
    let a = layout(&g, &r, 100).unwrap();
    let b = layout(&g, &r, 200).unwrap();
    assert_eq!(b.width.0, 2 * a.width.0);
    let centers = |geo: &Geometry| geo.marks().map(|(_, c, _)| c).collect::<Vec<QPoint>>();
    for (p, q) in centers(&a).iter().zip(centers(&b)) {
        assert!((2 * p.x.0 - q.x.0).abs() <= 1 && (2 * p.y.0 - q.y.0).abs() <= 1);
    }
}

#[test]
fn expression_layouts() {
    let r = seed::registry();
    let duality = render_expression(&parse_expression(seed::PRIESTLEY).unwrap(), &r, 100).unwrap();
    assert_eq!(duality.strokes().filter(|(n, _)| *n == "shaft").count(), 2);
    assert_eq!(duality.labels().collect::<Vec<_>>(), ["≈"]);
    // each Priestley space embeds an order glyph
    assert_eq!(duality.frames().count(), 2);

    let alone = render_expression(&parse_expression("set").unwrap(), &r, 100).unwrap();
    assert_eq!(alone, layout(&Glyph::bare("set"), &r, 100).unwrap());

    let rel = render_expression(&parse_expression("rel(a ⊆ b; set)").unwrap(), &r, 100).unwrap();
    assert_eq!(rel.labels().collect::<Vec<_>>(), ["a", "⊆", "b"]);
    assert_eq!(rel.strokes().count(), 3);
}

#[test]
fn tex_package_for_bound_glyphs() {
    let r = seed::registry();
    let selection: Vec<String> = r.bindings().iter().map(|b| b.concept.to_string()).collect();
    let pkg = emit_tex(&r, &selection, 64).unwrap();
    assert_eq!(pkg.sty.matches("\\newcommand").count(), 1 + r.bindings().len());
    assert_eq!(pkg.index.lines().count(), r.bindings().len());
    assert_eq!(pkg.artwork.len(), r.bindings().len());
    assert!(pkg.index.contains("\tcompact Hausdorff space\n"));
}

#[test]
fn interchange_round_trips() {
    let r = seed::registry();
    assert_eq!(interchange::import(&interchange::export(&r)).unwrap(), r);
    let empty = Registry::empty();
    assert_eq!(interchange::import(&interchange::export(&empty)).unwrap(), empty);
    let future = interchange::export(&empty).replace("\"version\": \"1\"", "\"version\": \"2\"");
    assert!(matches!(interchange::import(&future), Err(InterchangeError::Version { .. })));
}
