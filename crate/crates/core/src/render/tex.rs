use std::collections::BTreeMap;

use thiserror::Error;

use super::{glyph_svg, RenderError};
use crate::compose::resolve_glyph;
use crate::composer::{canonical_id, canonicalize};
use crate::registry::Registry;
use crate::semantics::lookup_concept;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TexError {
    #[error("glyph `{id}`: {source}")]
    Render { id: String, source: RenderError },
    #[error("glyphs `{first}` and `{second}` both map to macro \\{name}")]
    Collision { name: String, first: String, second: String },
}

/// A `.sty` package, its index and the SVG artwork it references.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TexPackage {
    pub sty: String,
    /// `\macro<TAB>concept name` lines.
    pub index: String,
    /// `(file name, svg)` pairs to be placed in `glyphs/`.
    pub artwork: Vec<(String, String)>,
}

pub const PACKAGE_NAME: &str = "vttglyphs";

/// TeX control-sequence name for a canonical glyph id: `vtt` followed by the
/// id's letters in lower case, digits spelled as the capitals `A`..`J`, other
/// characters dropped.
pub fn macro_name(id: &str) -> String {
    let mut out = String::from("vtt");
    for c in id.chars() {
        if c.is_ascii_alphabetic() {
            out.push(c.to_ascii_lowercase());
        } else if let Some(d) = c.to_digit(10) {
            out.push(char::from(b'A' + d as u8));
        }
    }
    out
}

/// Emits one macro per selected glyph. Selection entries may be anything
/// [`resolve_glyph`] accepts; entries naming the same canonical glyph collapse.
pub fn emit_tex(registry: &Registry, selection: &[String], size: u32) -> Result<TexPackage, TexError> {
    let mut macros: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut pkg = TexPackage::default();
    for sel in selection {
        let render_err = |source: RenderError| TexError::Render { id: sel.clone(), source };
        let glyph = resolve_glyph(sel, registry).map_err(|e| render_err(e.into()))?;
        let glyph = canonicalize(&glyph, registry);
        let id = canonical_id(&glyph, registry);
        let name = macro_name(&id);
        if let Some((other, _)) = macros.get(&name) {
            if *other == id {
                continue;
            }
            return Err(TexError::Collision { name, first: other.clone(), second: id });
        }
        let svg = glyph_svg(&glyph, registry, size).map_err(render_err)?;
        let concept = lookup_concept(&glyph, registry).map(|c| c.name.clone()).unwrap_or_else(|| "-".into());
        pkg.artwork.push((format!("{id}.svg"), svg));
        macros.insert(name, (id, concept));
    }
    pkg.sty = sty(&macros);
    for (name, (_, concept)) in &macros {
        pkg.index.push_str(&format!("\\{name}\t{concept}\n"));
    }
    pkg.artwork.sort();
    Ok(pkg)
}

fn sty(macros: &BTreeMap<String, (String, String)>) -> String {
    let mut s = String::new();
    s.push_str("\\NeedsTeXFormat{LaTeX2e}\n");
    s.push_str(&format!("\\ProvidesPackage{{{PACKAGE_NAME}}}[glyph macros]\n"));
    s.push_str("\\RequirePackage{svg}\n");
    s.push_str("\\newcommand{\\vttglyph}[1]{\\raisebox{-0.2ex}{\\includesvg[height=1.1em]{glyphs/#1}}}\n");
    for (name, (id, concept)) in macros {
        s.push_str(&format!("% {concept}\n\\newcommand{{\\{name}}}{{\\vttglyph{{{id}}}}}\n"));
    }
    s.push_str("\\endinput\n");
    s
}
