//! Deterministic layout of glyphs and expressions, SVG output, the TeX macro
//! package and the JSON interchange format.

pub mod expr;
pub mod geometry;
pub mod svg;
pub mod tex;

use thiserror::Error;

pub use expr::render_expression;
pub use geometry::{Geometry, Path, Prim, Q, QPoint};
pub use svg::to_svg;
pub use tex::{emit_tex, macro_name, TexPackage};

use crate::compose::ResolveError;
use crate::composer;
use crate::model::*;
use crate::registry::{region_rects, GlyphError, Registry};
use geometry::{Builder, Frame, UPath, UPrim};

/// Pixel size of a glyph's bounding box when none is given.
pub const DEFAULT_SIZE: u32 = 128;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RenderError {
    #[error(transparent)]
    Glyph(#[from] GlyphError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error("size must be positive")]
    ZeroSize,
}

/// Lays out a glyph in a `size`×`size` box.
pub fn layout(glyph: &Glyph, registry: &Registry, size: u32) -> Result<Geometry, RenderError> {
    if size == 0 {
        return Err(RenderError::ZeroSize);
    }
    registry.validate_glyph(glyph)?;
    let mut b = Builder::new();
    draw_glyph(glyph, registry, Frame::UNIT, &mut b)?;
    Ok(b.finish(1.0, 1.0, size))
}

/// Layout followed by SVG serialization.
pub fn glyph_svg(glyph: &Glyph, registry: &Registry, size: u32) -> Result<String, RenderError> {
    Ok(to_svg(&layout(glyph, registry, size)?))
}

/// Radius of a mark drawn in a region of the given extent.
pub(crate) fn mark_radius(w: f64, h: f64) -> f64 {
    0.3 * w.min(h)
}

pub(crate) fn draw_glyph(glyph: &Glyph, registry: &Registry, frame: Frame, b: &mut Builder) -> Result<(), RenderError> {
    let glyph = composer::canonicalize(glyph, registry);
    let radical = registry.radical_of(&glyph)?;
    let skew = radical.asymmetry;
    let shear = |x: f64, y: f64| frame.map(x + skew * (0.5 - y), y);
    let scale = frame.scale();

    for stroke in composer::strokes_after_edits(&glyph, registry)? {
        if glyph.abbreviated && stroke.group.is_some() && stroke.group == radical.limit_file {
            continue;
        }
        let width = stroke.weight.width() * scale;
        let path = match &stroke.shape {
            Shape::Line { points } => UPath::Polyline(points.iter().map(|p| shear(p.x, p.y)).collect()),
            Shape::Dot { center } => UPath::Disc { center: shear(center.x, center.y), radius: width },
            Shape::Circle { center, radius } if skew == 0.0 => {
                UPath::Circle { center: shear(center.x, center.y), radius: radius * scale }
            }
            Shape::Arc { center, radius, start, end } if skew == 0.0 && end - start < 360.0 => {
                let at = |deg: f64| {
                    let t = deg.to_radians();
                    shear(center.x + radius * t.cos(), center.y + radius * t.sin())
                };
                UPath::Arc { from: at(*start), to: at(*end), radius: radius * scale, large: end - start > 180.0 }
            }
            Shape::Circle { center, radius } => UPath::Polyline(sample_arc(*center, *radius, 0.0, 360.0, &shear)),
            Shape::Arc { center, radius, start, end } => {
                UPath::Polyline(sample_arc(*center, *radius, *start, *end, &shear))
            }
        };
        b.prims.push(UPrim::Stroke { name: stroke.name.clone(), path, width });
    }

    let rects = region_rects(radical, &glyph);
    for region in &radical.schema.regions {
        let Some(fill) = glyph.fill(&region.name) else { continue };
        let rect = rects.iter().find(|(n, _)| *n == region.name).map(|(_, r)| *r).expect("rect per region");
        match fill {
            Fill::Absent => {}
            Fill::Mark(m) => {
                let mark = registry.mark(m).ok_or_else(|| GlyphError::UnknownMark(m.clone()))?;
                let center = frame.map(region.anchor.x, region.anchor.y);
                b.prims.push(UPrim::Mark {
                    shape: mark.shape,
                    center,
                    radius: mark_radius(rect.width(), rect.height()) * scale,
                    width: Weight::Regular.width() * scale * 0.6,
                });
            }
            Fill::Glyph(sub) => {
                let inner = frame.inner(rect.x0, rect.y0, rect.width(), rect.height());
                b.prims.push(UPrim::Frame { frame: inner, width: 0.01 * scale });
                draw_glyph(sub, registry, inner, b)?;
            }
        }
    }
    Ok(())
}

fn sample_arc(center: Point, radius: f64, start: f64, end: f64, map: &dyn Fn(f64, f64) -> (f64, f64)) -> Vec<(f64, f64)> {
    const STEPS: usize = 48;
    (0..=STEPS)
        .map(|i| {
            let t = (start + (end - start) * i as f64 / STEPS as f64).to_radians();
            map(center.x + radius * t.cos(), center.y + radius * t.sin())
        })
        .collect()
}
