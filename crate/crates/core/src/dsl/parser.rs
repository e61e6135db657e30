use std::collections::BTreeMap;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::model::*;
use crate::semantics::parse_literal;

pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, i: 0 }
    }

    fn peek(&self) -> &Tok {
        self.toks.get(self.i).map(|t| &t.tok).unwrap_or(&Tok::Newline)
    }

    fn peek_at(&self, k: usize) -> &Tok {
        self.toks.get(self.i + k).map(|t| &t.tok).unwrap_or(&Tok::Newline)
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks
            .get(self.i)
            .or_else(|| self.toks.last())
            .map(|t| t.pos)
            .unwrap_or(Pos::START)
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.i += 1;
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn at_newline(&self) -> bool {
        *self.peek() == Tok::Newline
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::new(self.pos(), format!("expected {expected}, found {}", self.peek()))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn word(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Word(w) => {
                let w = w.clone();
                self.i += 1;
                Ok(w)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        let pos = self.pos();
        let w = self.word(what)?;
        if !is_valid_id(&w) {
            return Err(ParseError::new(pos, format!("`{w}` is not a valid identifier")));
        }
        Ok(w)
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Str(s) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn number(&mut self) -> PResult<f64> {
        let pos = self.pos();
        let w = self.word("a number")?;
        parse_number(&w).ok_or_else(|| ParseError::new(pos, format!("`{w}` is not a finite number")))
    }

    fn end_statement(&mut self) -> PResult<()> {
        if self.at_newline() {
            self.i += 1;
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

fn parse_number(w: &str) -> Option<f64> {
    let digits_only = w.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    w.parse::<f64>().ok().filter(|v| v.is_finite() && digits_only)
}

/// Parses a definition document.
pub fn parse(src: &str) -> Result<SourceFile, ParseError> {
    let toks = tokenize(src, Pos::START)?;
    let mut cur = Cursor::new(&toks);
    let mut items: Vec<Spanned<Item>> = Vec::new();
    let mut declared: BTreeMap<(&'static str, String), Pos> = BTreeMap::new();
    while !cur.at_end() {
        let start = cur.i;
        let pos = cur.pos();
        let item = parse_item(&mut cur)?;
        let mut spanned = Spanned::new(item, pos);
        spanned.words = toks[start..cur.i]
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Word(w) => Some((w.clone(), t.pos)),
                _ => None,
            })
            .collect();
        if let (Item::Expr(_), Some(Token { tok: Tok::Str(text), pos })) = (&spanned.node, toks.get(start + 1)) {
            let inner = tokenize(text, Pos { line: pos.line, col: pos.col + 1 })?;
            spanned.words.extend(inner.into_iter().filter_map(|t| match t.tok {
                Tok::Word(w) => Some((w, t.pos)),
                _ => None,
            }));
        }
        if let Some(id) = declared_id(&spanned.node) {
            let key = (spanned.node.keyword(), id.clone());
            if let Some(first) = declared.get(&key) {
                return Err(ParseError::new(
                    spanned.locate(&id),
                    format!("duplicate declaration of {} `{id}` (first declared at {first})", key.0),
                ));
            }
            declared.insert(key, pos);
        }
        items.push(spanned);
    }
    Ok(SourceFile { items })
}

fn declared_id(item: &Item) -> Option<String> {
    match item {
        Item::Constraint(c) => Some(c.id.to_string()),
        Item::Mark(m) => Some(m.id.to_string()),
        Item::Radical(r) => Some(r.id.to_string()),
        Item::Rule(r) => Some(r.id.to_string()),
        Item::Concept(c) => Some(c.id.to_string()),
        Item::Bind(_) | Item::Expr(_) => None,
    }
}

fn parse_item(c: &mut Cursor) -> PResult<Item> {
    let kw = c.word("a declaration keyword")?;
    let item = match kw.as_str() {
        "constraint" => Item::Constraint(parse_constraint(c)?),
        "mark" => Item::Mark(parse_mark(c)?),
        "radical" => Item::Radical(parse_radical(c)?),
        "rule" => Item::Rule(parse_rule(c)?),
        "concept" => Item::Concept(parse_concept(c)?),
        "bind" => Item::Bind(parse_bind(c)?),
        "expr" => {
            let pos = c.pos();
            let text = c.string("a quoted expression")?;
            // the string's content starts one column after the opening quote
            let origin = Pos { line: pos.line, col: pos.col + 1 };
            Item::Expr(parse_expression_at(&text, origin)?)
        }
        other => {
            return Err(ParseError::new(
                c.toks[c.i - 1].pos,
                format!(
                    "unknown declaration `{other}`; expected one of constraint, mark, radical, rule, concept, bind, expr"
                ),
            ))
        }
    };
    c.end_statement()?;
    Ok(item)
}

fn parse_constraint(c: &mut Cursor) -> PResult<PropertyConstraint> {
    let id = c.ident("a constraint id")?;
    let negatable = c.is_word("negatable");
    if negatable {
        c.bump();
    }
    let name = c.string("a quoted constraint name")?;
    let statement = if matches!(c.peek(), Tok::Str(_)) { c.string("")? } else { String::new() };
    Ok(PropertyConstraint { id: id.into(), name, statement, negatable })
}

fn parse_mark(c: &mut Cursor) -> PResult<Mark> {
    let id = c.ident("a mark id")?;
    let pos = c.pos();
    let polarity = match c.word("`positive` or `negative`")?.as_str() {
        "positive" => Polarity::Positive,
        "negative" => Polarity::Negative,
        other => return Err(ParseError::new(pos, format!("expected `positive` or `negative`, found `{other}`"))),
    };
    let pos = c.pos();
    let shape_word = c.word("a mark shape")?;
    let shape = MarkShape::from_keyword(&shape_word)
        .ok_or_else(|| ParseError::new(pos, format!("unknown mark shape `{shape_word}`")))?;
    Ok(Mark { id: id.into(), polarity, shape })
}


/// Reads `key=` pairs until end of line, calling `value` for each key.
fn keyed(
    c: &mut Cursor,
    allowed: &[&str],
    mut value: impl FnMut(&mut Cursor, &str) -> PResult<()>,
) -> PResult<Vec<String>> {
    let mut seen = Vec::new();
    while matches!(c.peek(), Tok::Word(_)) && matches!(c.peek_at(1), Tok::Punct("=")) {
        let pos = c.pos();
        let key = c.word("a key")?;
        if !allowed.contains(&key.as_str()) {
            return Err(ParseError::new(pos, format!("unknown key `{key}`; expected one of {}", allowed.join(", "))));
        }
        if seen.contains(&key) {
            return Err(ParseError::new(pos, format!("key `{key}` given twice")));
        }
        c.expect_punct("=")?;
        value(c, &key)?;
        seen.push(key);
    }
    Ok(seen)
}

fn require(seen: &[String], key: &str, c: &Cursor) -> PResult<()> {
    if seen.iter().any(|k| k == key) {
        Ok(())
    } else {
        Err(c.unexpected(&format!("`{key}=`")))
    }
}

fn list<T>(c: &mut Cursor, mut item: impl FnMut(&mut Cursor) -> PResult<T>) -> PResult<Vec<T>> {
    c.expect_punct("[")?;
    let mut out = Vec::new();
    while !c.eat_punct("]") {
        if c.at_end() {
            return Err(c.unexpected("`]`"));
        }
        out.push(item(c)?);
    }
    Ok(out)
}

fn family_word(c: &mut Cursor) -> PResult<Family> {
    let pos = c.pos();
    let w = c.word("a family")?;
    Family::from_keyword(&w).ok_or_else(|| {
        ParseError::new(pos, format!("unknown family `{w}`; expected structure, topological or other"))
    })
}

fn parse_radical(c: &mut Cursor) -> PResult<Radical> {
    let id = c.ident("a radical id")?;
    let name = if matches!(c.peek(), Tok::Str(_)) { c.string("")? } else { id.clone() };
    let mut r = Radical {
        id: id.into(),
        name,
        family: Family::Other,
        derives_from: None,
        table1_key: None,
        strokes: Vec::new(),
        schema: RegionSchema::default(),
        limit_file: None,
        baseline: Vec::new(),
        asymmetry: 0.0,
    };
    let seen = keyed(
        c,
        &["family", "from", "table1", "strokes", "regions", "limitfile", "baseline", "skew"],
        |c, key| {
            match key {
                "family" => r.family = family_word(c)?,
                "from" => r.derives_from = Some(c.ident("a radical id")?.into()),
                "table1" => r.table1_key = Some(c.ident("a Table 1 key")?),
                "strokes" => r.strokes = list(c, parse_stroke)?,
                "regions" => r.schema = RegionSchema::new(list(c, parse_region)?),
                "limitfile" => r.limit_file = Some(c.ident("a stroke group")?),
                "baseline" => r.baseline = list(c, parse_literal_word)?,
                "skew" => r.asymmetry = c.number()?,
                _ => unreachable!(),
            }
            Ok(())
        },
    )?;
    require(&seen, "family", c)?;
    require(&seen, "strokes", c)?;
    Ok(r)
}

fn parse_literal_word(c: &mut Cursor) -> PResult<Literal> {
    let pos = c.pos();
    let w = c.word("a literal such as `finite+`")?;
    parse_literal(&w).ok_or_else(|| ParseError::new(pos, format!("`{w}` is not a literal; write `<constraint>+` or `<constraint>-`")))
}

/// `name:shape(n,...)[@group][!heavy]`
fn parse_stroke(c: &mut Cursor) -> PResult<Stroke> {
    let name = c.ident("a stroke name")?;
    c.expect_punct(":")?;
    let pos = c.pos();
    let kw = c.word("a stroke shape")?;
    c.expect_punct("(")?;
    let mut params = Vec::new();
    if !c.is_punct(")") {
        params.push(c.number()?);
        while c.eat_punct(",") {
            params.push(c.number()?);
        }
    }
    c.expect_punct(")")?;
    let shape = Shape::from_params(&kw, &params).map_err(|m| ParseError::new(pos, m))?;
    let group = if c.eat_punct("@") { Some(c.ident("a stroke group")?) } else { None };
    let weight = if c.eat_punct("!") {
        let pos = c.pos();
        match c.word("`heavy`")?.as_str() {
            "heavy" => Weight::Heavy,
            other => return Err(ParseError::new(pos, format!("expected `heavy`, found `{other}`"))),
        }
    } else {
        Weight::Regular
    };
    Ok(Stroke { name, shape, group, weight })
}

/// `name:constraint@x,y:wxh [expandable]`
fn parse_region(c: &mut Cursor) -> PResult<Region> {
    let name = c.ident("a region name")?;
    c.expect_punct(":")?;
    let constraint = c.ident("a constraint id")?;
    c.expect_punct("@")?;
    let x = c.number()?;
    c.expect_punct(",")?;
    let y = c.number()?;
    c.expect_punct(":")?;
    let pos = c.pos();
    let size = c.word("an extent such as `0.2x0.1`")?;
    let bad = || ParseError::new(pos, format!("`{size}` is not an extent such as `0.2x0.1`"));
    let (w, h) = size.split_once('x').ok_or_else(bad)?;
    let w = parse_number(w).ok_or_else(bad)?;
    let h = parse_number(h).ok_or_else(bad)?;
    let expandable = c.is_word("expandable") && !matches!(c.peek_at(1), Tok::Punct(":"));
    if expandable {
        c.bump();
    }
    Ok(Region { name, constraint: constraint.into(), anchor: Point::new(x, y), extent: Extent { w, h }, expandable })
}

fn parse_rule(c: &mut Cursor) -> PResult<DerivationRule> {
    let id = c.ident("a rule id")?;
    let name = if matches!(c.peek(), Tok::Str(_)) { c.string("")? } else { id.clone() };
    let mut r = DerivationRule {
        id: id.into(),
        name,
        source: RuleSource::Family(Family::Other),
        requires: Vec::new(),
        edits: Vec::new(),
        adds: Vec::new(),
        target_concept: None,
    };
    let seen = keyed(c, &["from", "requires", "edits", "adds", "concept"], |c, key| {
        match key {
            "from" => {
                let w = c.ident("a radical id or family")?;
                r.source = match Family::from_keyword(&w) {
                    Some(f) => RuleSource::Family(f),
                    None => RuleSource::Radical(w.into()),
                };
            }
            "requires" => r.requires = list(c, |c| Ok(c.ident("a rule id")?.into()))?,
            "edits" => r.edits = list(c, parse_edit)?,
            "adds" => r.adds = list(c, parse_literal_word)?,
            "concept" => r.target_concept = Some(c.ident("a concept id")?.into()),
            _ => unreachable!(),
        }
        Ok(())
    })?;
    require(&seen, "from", c)?;
    Ok(r)
}

fn names(c: &mut Cursor) -> PResult<Vec<String>> {
    let mut v = vec![c.ident("a stroke name")?];
    while c.eat_punct(",") {
        v.push(c.ident("a stroke name")?);
    }
    Ok(v)
}

fn parse_edit(c: &mut Cursor) -> PResult<StrokeEdit> {
    let pos = c.pos();
    let kind = c.word("a stroke edit")?;
    c.expect_punct(":")?;
    Ok(match kind.as_str() {
        "extend" => {
            let stroke = c.ident("a stroke name")?;
            c.expect_punct(":")?;
            let dx = c.number()?;
            c.expect_punct(",")?;
            let dy = c.number()?;
            StrokeEdit::ExtendStroke { stroke, dx, dy }
        }
        "add" => StrokeEdit::AddStroke { stroke: parse_stroke(c)? },
        "replace" => {
            let targets = names(c)?;
            let mut with = Vec::new();
            while c.eat_punct("/") {
                with.push(parse_stroke(c)?);
            }
            StrokeEdit::ReplaceStrokes { targets, with }
        }
        "center-circle" => {
            let name = c.ident("a stroke name")?;
            c.expect_punct(":")?;
            StrokeEdit::AddCenterCircle { name, radius: c.number()? }
        }
        "cross" => {
            let targets = names(c)?;
            c.expect_punct(":")?;
            StrokeEdit::CrossTransform { targets, half: c.number()? }
        }
        other => {
            return Err(ParseError::new(
                pos,
                format!("unknown stroke edit `{other}`; expected extend, add, replace, center-circle or cross"),
            ))
        }
    })
}

fn parse_concept(c: &mut Cursor) -> PResult<Concept> {
    let id = c.ident("a concept id")?;
    let name = c.string("a quoted concept name")?;
    let mut concept = Concept { id: id.into(), name, aliases: Vec::new(), area: String::new(), cryptomorphism_group: None };
    let seen = keyed(c, &["area", "crypto", "aliases"], |c, key| {
        match key {
            "area" => concept.area = c.ident("an area tag")?,
            "crypto" => concept.cryptomorphism_group = Some(c.ident("a cryptomorphism group")?),
            "aliases" => concept.aliases = list(c, |c| c.string("a quoted alias"))?,
            _ => unreachable!(),
        }
        Ok(())
    })?;
    require(&seen, "area", c)?;
    Ok(concept)
}

fn parse_bind(c: &mut Cursor) -> PResult<Binding> {
    let glyph = parse_glyph(c)?;
    c.expect_punct("->")?;
    let concept = c.ident("a concept id")?.into();
    let precedence = c.is_word("precedence");
    if precedence {
        c.bump();
    }
    Ok(Binding { glyph, concept, precedence })
}

/// `rad` or `rad( region=mark|_|glyph ... ; rules: r ... ; abbreviated ; expand: region*k ... )`
pub(crate) fn parse_glyph(c: &mut Cursor) -> PResult<Glyph> {
    let radical = c.ident("a radical id")?;
    let mut g = Glyph::bare(radical);
    if !c.eat_punct("(") {
        return Ok(g);
    }
    while matches!(c.peek(), Tok::Word(_)) {
        let region = c.ident("a region name")?;
        c.expect_punct("=")?;
        let fill = match (c.peek().clone(), c.peek_at(1)) {
            (Tok::Word(w), _) if w == "_" => {
                c.bump();
                Fill::Absent
            }
            (Tok::Word(_), Tok::Punct("(")) => Fill::Glyph(Box::new(parse_glyph(c)?)),
            _ => Fill::Mark(c.ident("a mark id, `_` or a sub-glyph")?.into()),
        };
        g.assignment.push(RegionFill { region, fill });
    }
    let mut sections: Vec<String> = Vec::new();
    while c.eat_punct(";") {
        let pos = c.pos();
        let section = c.word("`rules:`, `abbreviated` or `expand:`")?;
        if sections.contains(&section) {
            return Err(ParseError::new(pos, format!("section `{section}` given twice")));
        }
        match section.as_str() {
            "rules" => {
                c.expect_punct(":")?;
                while matches!(c.peek(), Tok::Word(_)) {
                    g.derivations.push(c.ident("a rule id")?.into());
                }
            }
            "abbreviated" => g.abbreviated = true,
            "expand" => {
                c.expect_punct(":")?;
                while matches!(c.peek(), Tok::Word(_)) {
                    let pos = c.pos();
                    let w = c.word("")?;
                    let bad = || ParseError::new(pos, format!("`{w}` is not a region expansion such as `algebraic*1.5`"));
                    let (region, k) = w.split_once('*').ok_or_else(bad)?;
                    if !is_valid_id(region) {
                        return Err(bad());
                    }
                    let scale = parse_number(k).and_then(Scale::from_f64).ok_or_else(bad)?;
                    g.expansions.push(Expansion { region: region.to_owned(), scale });
                }
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unknown glyph section `{other}`; expected rules, abbreviated or expand"),
                ))
            }
        }
        sections.push(section);
    }
    c.expect_punct(")")?;
    Ok(g)
}

/// Parses a standalone glyph literal.
pub fn parse_glyph_literal(text: &str) -> Result<Glyph, ParseError> {
    let toks = tokenize(text, Pos::START)?;
    let mut c = Cursor::new(&toks);
    let g = parse_glyph(&mut c)?;
    c.end_statement()?;
    if !c.at_end() {
        return Err(c.unexpected("end of input"));
    }
    Ok(g)
}

/// Parses expression notation.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_expression_at(text, Pos::START)
}

fn parse_expression_at(text: &str, origin: Pos) -> Result<Expr, ParseError> {
    let toks = tokenize(text, origin)?;
    if toks.iter().filter(|t| t.tok == Tok::Newline).count() > 1 {
        return Err(ParseError::new(origin, "an expression must fit on one line"));
    }
    let mut c = Cursor::new(&toks);
    if c.at_newline() {
        return Err(c.unexpected("an expression"));
    }
    let left = parse_side(&mut c)?;
    let expr = if c.eat_punct("≈") || c.eat_punct("~=") {
        let right = parse_side(&mut c)?;
        Expr::Duality { left: Box::new(left), right: Box::new(right) }
    } else {
        match left {
            Expr::Glyph(g) => Expr::Standalone(g),
            other => other,
        }
    };
    if !c.at_newline() {
        return Err(c.unexpected("end of expression"));
    }
    Ok(expr)
}

fn parse_side(c: &mut Cursor) -> PResult<Expr> {
    let head = match c.peek() {
        Tok::Word(w) if w == "arrow" => Some(ArrowHead::Forward),
        Tok::Word(w) if w == "oparrow" => Some(ArrowHead::Backward),
        _ => None,
    };
    if let (Some(head), Tok::Punct("(")) = (head, c.peek_at(1)) {
        c.bump();
        c.bump();
        if c.is_punct("|") {
            return Err(c.unexpected("the objects glyph above the arrow"));
        }
        let objects = parse_glyph_ref(c)?;
        if !c.eat_punct("|") {
            return Err(c.unexpected("`|` followed by the morphisms glyph"));
        }
        if c.is_punct(")") {
            return Err(c.unexpected("the morphisms glyph below the arrow"));
        }
        let morphisms = parse_glyph_ref(c)?;
        c.expect_punct(")")?;
        return Ok(Expr::Arrow { objects, morphisms, head });
    }
    if c.is_word("rel") && matches!(c.peek_at(1), Tok::Punct("(")) {
        c.bump();
        c.bump();
        let left = c.word("a relation term")?;
        let symbol = match c.peek() {
            Tok::Punct(p) if RELATION_SYMBOLS.contains(p) => p.to_string(),
            _ => return Err(c.unexpected(&format!("a relation symbol ({})", RELATION_SYMBOLS.join(" ")))),
        };
        c.bump();
        let right = c.word("a relation term")?;
        let annotation = if c.eat_punct(";") { Some(parse_glyph_ref(c)?) } else { None };
        c.expect_punct(")")?;
        return Ok(Expr::Relation { left, symbol, right, annotation });
    }
    Ok(Expr::Glyph(parse_glyph_ref(c)?))
}

fn parse_glyph_ref(c: &mut Cursor) -> PResult<GlyphRef> {
    if matches!(c.peek_at(1), Tok::Punct("(")) {
        Ok(GlyphRef::Inline(parse_glyph(c)?))
    } else {
        Ok(GlyphRef::Id(c.word("a glyph reference")?))
    }
}
