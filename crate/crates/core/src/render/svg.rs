use std::fmt::Write;

use super::geometry::*;
use crate::model::MarkShape;

/// Serializes geometry as a standalone SVG 1.1 document. Element and
/// attribute order are fixed, so equal geometry gives identical bytes.
pub fn to_svg(g: &Geometry) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = g.width,
        h = g.height
    )
    .unwrap();
    for p in &g.prims {
        s.push_str(&prim(p));
        s.push('\n');
    }
    s.push_str("</svg>\n");
    s
}

fn pt(p: QPoint) -> String {
    format!("{},{}", p.x, p.y)
}

const INK: &str = "#111";

fn prim(p: &Prim) -> String {
    match p {
        Prim::Stroke { name, path, width } => {
            let open = format!(r#"fill="none" stroke="{INK}" stroke-width="{width}" stroke-linecap="round" stroke-linejoin="round""#);
            match path {
                Path::Polyline { points } => {
                    let pts: Vec<String> = points.iter().map(|p| pt(*p)).collect();
                    format!(r#"<polyline class="stroke" data-name="{}" points="{}" {open}/>"#, esc(name), pts.join(" "))
                }
                Path::Arc { from, to, radius, large } => format!(
                    r#"<path class="stroke" data-name="{}" d="M{} A{r},{r} 0 {} 1 {}" {open}/>"#,
                    esc(name),
                    pt(*from),
                    u8::from(*large),
                    pt(*to),
                    r = radius
                ),
                Path::Circle { center, radius } => format!(
                    r#"<circle class="stroke" data-name="{}" cx="{}" cy="{}" r="{radius}" {open}/>"#,
                    esc(name),
                    center.x,
                    center.y
                ),
                Path::Disc { center, radius } => format!(
                    r#"<circle class="stroke" data-name="{}" cx="{}" cy="{}" r="{radius}" fill="{INK}" stroke="none"/>"#,
                    esc(name),
                    center.x,
                    center.y
                ),
            }
        }
        Prim::Mark { shape, center, radius, width } => mark(*shape, *center, *radius, *width),
        Prim::Frame { x, y, w, h, width } => format!(
            r##"<rect class="frame" x="{x}" y="{y}" width="{w}" height="{h}" fill="none" stroke="#999" stroke-width="{width}" stroke-dasharray="{width},{width}"/>"##
        ),
        Prim::Label { at, text, size } => format!(
            r#"<text x="{}" y="{}" font-family="serif" font-size="{size}" text-anchor="middle" fill="{INK}">{}</text>"#,
            at.x,
            at.y,
            esc(text)
        ),
    }
}

fn mark(shape: MarkShape, c: QPoint, r: Q, width: Q) -> String {
    let line = format!(r#"fill="none" stroke="{INK}" stroke-width="{width}""#);
    let off = |dx: i64, dy: i64| QPoint { x: Q(c.x.0 + dx), y: Q(c.y.0 + dy) };
    let d = r.0;
    // squares and crosses use the inscribed half-width
    let k = d * 707 / 1000;
    let body = match shape {
        MarkShape::Dot => format!(r#"<circle cx="{}" cy="{}" r="{r}" fill="{INK}" stroke="none""#, c.x, c.y),
        MarkShape::Circle => format!(r#"<circle cx="{}" cy="{}" r="{r}" {line}"#, c.x, c.y),
        MarkShape::Square => format!(
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{INK}" stroke="none""#,
            Q(c.x.0 - k),
            Q(c.y.0 - k),
            Q(2 * k),
            Q(2 * k)
        ),
        MarkShape::Diamond => format!(
            r#"<polygon points="{} {} {} {}" fill="{INK}" stroke="none""#,
            pt(off(0, -d)),
            pt(off(d, 0)),
            pt(off(0, d)),
            pt(off(-d, 0))
        ),
        MarkShape::Bar => format!(r#"<polyline points="{} {}" {line}"#, pt(off(-d, 0)), pt(off(d, 0))),
        MarkShape::Cross => format!(
            r#"<path d="M{} L{} M{} L{}" {line}"#,
            pt(off(-k, -k)),
            pt(off(k, k)),
            pt(off(-k, k)),
            pt(off(k, -k))
        ),
    };
    format!(r#"{body} class="mark" data-shape="{}"/>"#, shape.keyword())
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_shape() {
        let g = Geometry {
            width: Q(100_000),
            height: Q(100_000),
            prims: vec![
                Prim::Stroke {
                    name: "s".into(),
                    path: Path::Polyline {
                        points: vec![QPoint { x: Q(50_000), y: Q(10_000) }, QPoint { x: Q(50_000), y: Q(90_000) }],
                    },
                    width: Q(3_500),
                },
                Prim::Label { at: QPoint { x: Q(1), y: Q(2) }, text: "a<b".into(), size: Q(10_000) },
            ],
        };
        let svg = to_svg(&g);
        assert!(svg.starts_with(r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="100" height="100" viewBox="0 0 100 100">"#));
        assert!(svg.contains(r#"points="50,10 50,90""#));
        assert!(svg.contains("a&lt;b"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
