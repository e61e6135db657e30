use std::fmt;

use crate::model::*;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, col: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A node with the position of its leading token. Equality ignores positions.
#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub node: T,
    pub pos: Pos,
    /// Every word in the statement with its position, for pointing diagnostics
    /// at a specific reference.
    pub words: Vec<(String, Pos)>,
}

impl<T> Spanned<T> {
    pub fn new(node: T, pos: Pos) -> Self {
        Spanned { node, pos, words: Vec::new() }
    }

    /// Position of the first occurrence of `word` after the leading keyword,
    /// or of the statement itself.
    pub fn locate(&self, word: &str) -> Pos {
        self.words.iter().skip(1).find(|(w, _)| w == word).map(|(_, p)| *p).unwrap_or(self.pos)
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

/// One top-level statement.
#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Constraint(PropertyConstraint),
    Mark(Mark),
    Radical(Radical),
    Rule(DerivationRule),
    Concept(Concept),
    Bind(Binding),
    Expr(Expr),
}

impl Item {
    pub fn keyword(&self) -> &'static str {
        match self {
            Item::Constraint(_) => "constraint",
            Item::Mark(_) => "mark",
            Item::Radical(_) => "radical",
            Item::Rule(_) => "rule",
            Item::Concept(_) => "concept",
            Item::Bind(_) => "bind",
            Item::Expr(_) => "expr",
        }
    }
}

/// A parsed definition document, in source order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceFile {
    pub items: Vec<Spanned<Item>>,
}

impl SourceFile {
    pub fn expressions(&self) -> impl Iterator<Item = &Spanned<Item>> {
        self.items.iter().filter(|i| matches!(i.node, Item::Expr(_)))
    }
}

/// A glyph named by registry id or written inline.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GlyphRef {
    Id(String),
    Inline(Glyph),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowHead {
    /// `arrow`: points right.
    Forward,
    /// `oparrow`: points left.
    Backward,
}

impl ArrowHead {
    pub fn keyword(self) -> &'static str {
        match self {
            ArrowHead::Forward => "arrow",
            ArrowHead::Backward => "oparrow",
        }
    }
}

/// Expression notation: glyphs under arrows, under relations, or standing alone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// A whole expression that is just one glyph.
    Standalone(GlyphRef),
    /// A glyph used as one side of a duality.
    Glyph(GlyphRef),
    /// Objects glyph above the shaft, morphisms glyph below.
    Arrow { objects: GlyphRef, morphisms: GlyphRef, head: ArrowHead },
    Relation { left: String, symbol: String, right: String, annotation: Option<GlyphRef> },
    Duality { left: Box<Expr>, right: Box<Expr> },
}

impl Expr {
    /// Glyph references in left-to-right order.
    pub fn glyph_refs(&self) -> Vec<&GlyphRef> {
        match self {
            Expr::Standalone(g) | Expr::Glyph(g) => vec![g],
            Expr::Arrow { objects, morphisms, .. } => vec![objects, morphisms],
            Expr::Relation { annotation, .. } => annotation.iter().collect(),
            Expr::Duality { left, right } => {
                let mut v = left.glyph_refs();
                v.extend(right.glyph_refs());
                v
            }
        }
    }
}

/// Relation symbols accepted between relation terms.
pub const RELATION_SYMBOLS: &[&str] = &["=", "<=", "≤", "<", "⊆", "⊂", "∈", "≅", "~", "⊢"];
