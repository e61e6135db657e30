use super::geometry::{Builder, Frame, UPath, UPrim};
use super::{draw_glyph, Geometry, RenderError};
use crate::compose::resolve_glyph_ref;
use crate::dsl::{ArrowHead, Expr, GlyphRef};
use crate::model::Weight;
use crate::registry::Registry;

const ARROW: (f64, f64) = (1.6, 1.4);
const RELATION: (f64, f64) = (1.8, 1.4);
const DUALITY_GAP: f64 = 0.6;
const TEXT: f64 = 0.3;

/// Lays out expression notation. One unit is one glyph box of `size` pixels.
pub fn render_expression(expr: &Expr, registry: &Registry, size: u32) -> Result<Geometry, RenderError> {
    if size == 0 {
        return Err(RenderError::ZeroSize);
    }
    for r in expr.glyph_refs() {
        resolve_glyph_ref(r, registry)?;
    }
    let (w, h) = extent(expr);
    let mut b = Builder::new();
    draw(expr, registry, 0.0, 0.0, &mut b)?;
    Ok(b.finish(w, h, size))
}

fn extent(e: &Expr) -> (f64, f64) {
    match e {
        Expr::Standalone(_) | Expr::Glyph(_) => (1.0, 1.0),
        Expr::Arrow { .. } => ARROW,
        Expr::Relation { .. } => RELATION,
        Expr::Duality { left, right } => {
            let (lw, lh) = extent(left);
            let (rw, rh) = extent(right);
            (lw + DUALITY_GAP + rw, lh.max(rh))
        }
    }
}

fn glyph_at(r: &GlyphRef, registry: &Registry, frame: Frame, b: &mut Builder) -> Result<(), RenderError> {
    let g = resolve_glyph_ref(r, registry)?;
    draw_glyph(&g, registry, frame, b)
}

fn line(b: &mut Builder, name: &str, pts: Vec<(f64, f64)>) {
    b.prims.push(UPrim::Stroke { name: name.into(), path: UPath::Polyline(pts), width: Weight::Regular.width() });
}

fn label(b: &mut Builder, x: f64, y: f64, text: &str, size: f64) {
    b.prims.push(UPrim::Label { at: (x, y), text: text.into(), size });
}

fn draw(e: &Expr, registry: &Registry, x: f64, y: f64, b: &mut Builder) -> Result<(), RenderError> {
    match e {
        Expr::Standalone(r) | Expr::Glyph(r) => glyph_at(r, registry, Frame { x, y, w: 1.0, h: 1.0 }, b)?,
        Expr::Arrow { objects, morphisms, head } => {
            glyph_at(objects, registry, Frame { x: x + 0.5, y: y + 0.05, w: 0.6, h: 0.6 }, b)?;
            let shaft_y = y + 0.7;
            line(b, "shaft", vec![(x + 0.1, shaft_y), (x + 1.5, shaft_y)]);
            let (tip, back) = match head {
                ArrowHead::Forward => (x + 1.5, x + 1.38),
                ArrowHead::Backward => (x + 0.1, x + 0.22),
            };
            line(b, "head", vec![(back, shaft_y - 0.08), (tip, shaft_y), (back, shaft_y + 0.08)]);
            glyph_at(morphisms, registry, Frame { x: x + 0.5, y: y + 0.75, w: 0.6, h: 0.6 }, b)?;
        }
        Expr::Relation { left, symbol, right, annotation } => {
            let base = y + 0.62;
            label(b, x + 0.35, base, left, TEXT);
            label(b, x + 0.9, base, symbol, TEXT);
            label(b, x + 1.45, base, right, TEXT);
            if let Some(a) = annotation {
                glyph_at(a, registry, Frame { x: x + 0.65, y: y + 0.8, w: 0.5, h: 0.5 }, b)?;
            }
        }
        Expr::Duality { left, right } => {
            let (lw, lh) = extent(left);
            let (_, rh) = extent(right);
            let h = lh.max(rh);
            draw(left, registry, x, y + (h - lh) / 2.0, b)?;
            label(b, x + lw + DUALITY_GAP / 2.0, y + h / 2.0 + 0.13, "≈", 0.4);
            draw(right, registry, x + lw + DUALITY_GAP, y + (h - rh) / 2.0, b)?;
        }
    }
    Ok(())
}
