use std::fmt::Write;

use super::ast::*;
use crate::model::*;

/// Prints a document in canonical layout: one statement per line.
pub fn print(file: &SourceFile) -> String {
    let mut out = String::new();
    for item in &file.items {
        out.push_str(&print_item(&item.node));
        out.push('\n');
    }
    out
}

pub fn print_item(item: &Item) -> String {
    match item {
        Item::Constraint(c) => {
            let mut s = format!("constraint {}", c.id);
            if c.negatable {
                s.push_str(" negatable");
            }
            write!(s, " {}", quote(&c.name)).unwrap();
            if !c.statement.is_empty() {
                write!(s, " {}", quote(&c.statement)).unwrap();
            }
            s
        }
        Item::Mark(m) => format!("mark {} {} {}", m.id, m.polarity.keyword(), m.shape.keyword()),
        Item::Radical(r) => print_radical(r),
        Item::Rule(r) => print_rule(r),
        Item::Concept(c) => {
            let mut s = format!("concept {} {} area={}", c.id, quote(&c.name), c.area);
            if let Some(g) = &c.cryptomorphism_group {
                write!(s, " crypto={g}").unwrap();
            }
            if !c.aliases.is_empty() {
                let aliases: Vec<String> = c.aliases.iter().map(|a| quote(a)).collect();
                write!(s, " aliases=[ {} ]", aliases.join(" ")).unwrap();
            }
            s
        }
        Item::Bind(b) => {
            let mut s = format!("bind {} -> {}", print_glyph(&b.glyph), b.concept);
            if b.precedence {
                s.push_str(" precedence");
            }
            s
        }
        Item::Expr(e) => format!("expr {}", quote(&print_expression(e))),
    }
}

fn print_radical(r: &Radical) -> String {
    let mut s = format!("radical {} {} family={}", r.id, quote(&r.name), r.family.keyword());
    if let Some(p) = &r.derives_from {
        write!(s, " from={p}").unwrap();
    }
    if let Some(k) = &r.table1_key {
        write!(s, " table1={k}").unwrap();
    }
    let strokes: Vec<String> = r.strokes.iter().map(print_stroke).collect();
    write!(s, " strokes=[ {} ]", strokes.join(" ")).unwrap();
    if !r.schema.is_empty() {
        let regions: Vec<String> = r.schema.regions.iter().map(print_region).collect();
        write!(s, " regions=[ {} ]", regions.join(" ")).unwrap();
    }
    if let Some(l) = &r.limit_file {
        write!(s, " limitfile={l}").unwrap();
    }
    if !r.baseline.is_empty() {
        write!(s, " baseline=[ {} ]", literals(&r.baseline)).unwrap();
    }
    if r.asymmetry != 0.0 {
        write!(s, " skew={}", r.asymmetry).unwrap();
    }
    s
}

fn print_rule(r: &DerivationRule) -> String {
    let source = match &r.source {
        RuleSource::Radical(id) => id.to_string(),
        RuleSource::Family(f) => f.keyword().to_owned(),
    };
    let mut s = format!("rule {} {} from={source}", r.id, quote(&r.name));
    if !r.requires.is_empty() {
        let req: Vec<&str> = r.requires.iter().map(|x| x.as_str()).collect();
        write!(s, " requires=[ {} ]", req.join(" ")).unwrap();
    }
    if !r.edits.is_empty() {
        let edits: Vec<String> = r.edits.iter().map(print_edit).collect();
        write!(s, " edits=[ {} ]", edits.join(" ")).unwrap();
    }
    if !r.adds.is_empty() {
        write!(s, " adds=[ {} ]", literals(&r.adds)).unwrap();
    }
    if let Some(c) = &r.target_concept {
        write!(s, " concept={c}").unwrap();
    }
    s
}

fn literals(l: &[Literal]) -> String {
    l.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn nums(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn print_stroke(s: &Stroke) -> String {
    let mut out = format!("{}:{}({})", s.name, s.shape.keyword(), nums(&s.shape.params()));
    if let Some(g) = &s.group {
        write!(out, "@{g}").unwrap();
    }
    if s.weight == Weight::Heavy {
        out.push_str("!heavy");
    }
    out
}

fn print_region(r: &Region) -> String {
    let mut s = format!(
        "{}:{}@{},{}:{}x{}",
        r.name, r.constraint, r.anchor.x, r.anchor.y, r.extent.w, r.extent.h
    );
    if r.expandable {
        s.push_str(" expandable");
    }
    s
}

fn print_edit(e: &StrokeEdit) -> String {
    match e {
        StrokeEdit::ExtendStroke { stroke, dx, dy } => format!("extend:{stroke}:{dx},{dy}"),
        StrokeEdit::AddStroke { stroke } => format!("add:{}", print_stroke(stroke)),
        StrokeEdit::ReplaceStrokes { targets, with } => {
            let mut s = format!("replace:{}", targets.join(","));
            for w in with {
                write!(s, "/{}", print_stroke(w)).unwrap();
            }
            s
        }
        StrokeEdit::AddCenterCircle { name, radius } => format!("center-circle:{name}:{radius}"),
        StrokeEdit::CrossTransform { targets, half } => format!("cross:{}:{half}", targets.join(",")),
    }
}

/// Glyph literal exactly as stored; callers canonicalize first when they want
/// the canonical text.
pub fn print_glyph(g: &Glyph) -> String {
    let mut parts: Vec<String> = Vec::new();
    let entries: Vec<String> = g
        .assignment
        .iter()
        .map(|e| {
            let fill = match &e.fill {
                Fill::Absent => "_".to_owned(),
                Fill::Mark(m) => m.to_string(),
                Fill::Glyph(sub) => {
                    let t = print_glyph(sub);
                    if t.ends_with(')') { t } else { format!("{t}()") }
                }
            };
            format!("{}={fill}", e.region)
        })
        .collect();
    parts.push(entries.join(" "));
    if !g.derivations.is_empty() {
        let r: Vec<&str> = g.derivations.iter().map(|r| r.as_str()).collect();
        parts.push(format!("rules: {}", r.join(" ")));
    }
    if g.abbreviated {
        parts.push("abbreviated".into());
    }
    if !g.expansions.is_empty() {
        let e: Vec<String> = g.expansions.iter().map(|e| format!("{}*{}", e.region, e.scale)).collect();
        parts.push(format!("expand: {}", e.join(" ")));
    }
    if parts.len() == 1 && parts[0].is_empty() {
        return g.radical.to_string();
    }
    format!("{}({})", g.radical, parts.join("; "))
}

pub fn print_glyph_ref(r: &GlyphRef) -> String {
    match r {
        GlyphRef::Id(id) => id.clone(),
        GlyphRef::Inline(g) => {
            let t = print_glyph(g);
            if t.ends_with(')') { t } else { format!("{t}()") }
        }
    }
}

pub fn print_expression(e: &Expr) -> String {
    match e {
        Expr::Standalone(g) | Expr::Glyph(g) => print_glyph_ref(g),
        Expr::Arrow { objects, morphisms, head } => {
            format!("{}({} | {})", head.keyword(), print_glyph_ref(objects), print_glyph_ref(morphisms))
        }
        Expr::Relation { left, symbol, right, annotation } => match annotation {
            Some(a) => format!("rel({left} {symbol} {right}; {})", print_glyph_ref(a)),
            None => format!("rel({left} {symbol} {right})"),
        },
        Expr::Duality { left, right } => format!("{} ≈ {}", print_expression(left), print_expression(right)),
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
