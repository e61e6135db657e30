//! Domain vocabulary: constraints, marks, radicals, rules, concepts and glyphs.
//!
//! Everything here is plain data. Cross-reference resolution and invariant
//! checking happen when a [`Definitions`] set is turned into a
//! [`Registry`](crate::Registry).

use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

id_type!(
    /// Identifier of a [`PropertyConstraint`].
    ConstraintId
);
id_type!(MarkId);
id_type!(RadicalId);
id_type!(RuleId);
id_type!(ConceptId);

/// Returns true if `id` is a well-formed entity identifier.
///
/// Identifiers start with an ASCII letter and continue with letters, digits,
/// `-`, `_` or `.`; they never end with `-` or `+` so signed literals such as
/// `finite-` stay unambiguous.
pub fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    if !id
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
    {
        return false;
    }
    !id.ends_with('-') && !id.ends_with('.')
}

/// A logical constraint that a region of a glyph can be loaded with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyConstraint {
    pub id: ConstraintId,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub statement: String,
    /// Whether a negative mark is meaningful for this constraint.
    pub negatable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn symbol(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }

    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Printable shape of a mark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkShape {
    /// Filled disc.
    Dot,
    /// Open circle.
    Circle,
    Square,
    Diamond,
    Bar,
    Cross,
}

impl MarkShape {
    pub const ALL: [MarkShape; 6] = [
        MarkShape::Dot,
        MarkShape::Circle,
        MarkShape::Square,
        MarkShape::Diamond,
        MarkShape::Bar,
        MarkShape::Cross,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            MarkShape::Dot => "dot",
            MarkShape::Circle => "circle",
            MarkShape::Square => "square",
            MarkShape::Diamond => "diamond",
            MarkShape::Bar => "bar",
            MarkShape::Cross => "cross",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    pub id: MarkId,
    pub polarity: Polarity,
    pub shape: MarkShape,
}

/// A point in the unit bounding box, `y` growing downwards.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub w: f64,
    pub h: f64,
}

/// Axis-aligned rectangle, used for region footprints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn centered(anchor: Point, extent: Extent) -> Self {
        Rect {
            x0: anchor.x - extent.w / 2.0,
            y0: anchor.y - extent.h / 2.0,
            x1: anchor.x + extent.w / 2.0,
            y1: anchor.y + extent.h / 2.0,
        }
    }

    /// Interior intersection; rectangles sharing only an edge do not overlap.
    pub fn overlaps(&self, other: &Rect) -> bool {
        const EPS: f64 = 1e-9;
        self.x0 < other.x1 - EPS
            && other.x0 < self.x1 - EPS
            && self.y0 < other.y1 - EPS
            && other.y0 < self.y1 - EPS
    }

    pub fn within_unit_box(&self) -> bool {
        const EPS: f64 = 1e-9;
        self.x0 >= -EPS && self.y0 >= -EPS && self.x1 <= 1.0 + EPS && self.y1 <= 1.0 + EPS
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// A constraint-bound spatial region of a radical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub name: String,
    pub constraint: ConstraintId,
    pub anchor: Point,
    pub extent: Extent,
    #[serde(default)]
    pub expandable: bool,
}

impl Region {
    pub fn rect(&self) -> Rect {
        Rect::centered(self.anchor, self.extent)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionSchema {
    pub regions: Vec<Region>,
}

impl RegionSchema {
    pub fn new(regions: Vec<Region>) -> Self {
        Self { regions }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.name == name)
    }

    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }

    /// The region that hosts embedded structure glyphs: the first expandable one.
    pub fn embedding_home(&self) -> Option<&Region> {
        self.regions.iter().find(|r| r.expandable)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Structure,
    Topological,
    Other,
}

impl Family {
    pub fn keyword(self) -> &'static str {
        match self {
            Family::Structure => "structure",
            Family::Topological => "topological",
            Family::Other => "other",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "structure" => Some(Family::Structure),
            "topological" => Some(Family::Topological),
            "other" => Some(Family::Other),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    #[default]
    Regular,
    Heavy,
}

impl Weight {
    /// Stroke width as a fraction of the bounding box.
    pub fn width(self) -> f64 {
        match self {
            Weight::Regular => 0.035,
            Weight::Heavy => 0.06,
        }
    }
}

/// Schematic stroke geometry in unit-box coordinates. Angles are in degrees,
/// measured clockwise from the positive x axis (y grows downwards) and arcs
/// always sweep from `start` towards increasing angles until `end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Line { points: Vec<Point> },
    Arc { center: Point, radius: f64, start: f64, end: f64 },
    Dot { center: Point },
    Circle { center: Point, radius: f64 },
}

impl Shape {
    pub fn keyword(&self) -> &'static str {
        match self {
            Shape::Line { .. } => "line",
            Shape::Arc { .. } => "arc",
            Shape::Dot { .. } => "dot",
            Shape::Circle { .. } => "circle",
        }
    }

    /// Flat parameter list, in the order the definition language writes it.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Shape::Line { points } => points.iter().flat_map(|p| [p.x, p.y]).collect(),
            Shape::Arc { center, radius, start, end } => {
                vec![center.x, center.y, *radius, *start, *end]
            }
            Shape::Dot { center } => vec![center.x, center.y],
            Shape::Circle { center, radius } => vec![center.x, center.y, *radius],
        }
    }

    pub fn from_params(keyword: &str, p: &[f64]) -> Result<Shape, String> {
        match keyword {
            "line" => {
                if p.len() < 4 || !p.len().is_multiple_of(2) {
                    return Err(format!("line needs an even number (>= 4) of coordinates, got {}", p.len()));
                }
                Ok(Shape::Line { points: p.chunks(2).map(|c| Point::new(c[0], c[1])).collect() })
            }
            "arc" => match p {
                [cx, cy, r, a0, a1] => Ok(Shape::Arc {
                    center: Point::new(*cx, *cy),
                    radius: *r,
                    start: *a0,
                    end: *a1,
                }),
                _ => Err(format!("arc takes 5 parameters, got {}", p.len())),
            },
            "dot" => match p {
                [x, y] => Ok(Shape::Dot { center: Point::new(*x, *y) }),
                _ => Err(format!("dot takes 2 parameters, got {}", p.len())),
            },
            "circle" => match p {
                [x, y, r] => Ok(Shape::Circle { center: Point::new(*x, *y), radius: *r }),
                _ => Err(format!("circle takes 3 parameters, got {}", p.len())),
            },
            other => Err(format!("unknown stroke shape `{other}`")),
        }
    }
}

/// One named schematic stroke of a radical or rule edit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stroke {
    pub name: String,
    pub shape: Shape,
    /// Stroke group; the radical's limit file names one of these.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default)]
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Radical {
    pub id: RadicalId,
    pub name: String,
    pub family: Family,
    /// Parent radical this one was derived from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derives_from: Option<RadicalId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table1_key: Option<String>,
    pub strokes: Vec<Stroke>,
    pub schema: RegionSchema,
    /// Stroke group that abbreviation suppresses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_file: Option<String>,
    /// Literals every glyph on this radical asserts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub baseline: Vec<Literal>,
    /// Horizontal shear applied to the strokes; zero for all seeded radicals.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub asymmetry: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

/// A signed constraint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub constraint: ConstraintId,
    pub sign: Polarity,
}

impl Literal {
    pub fn new(constraint: impl Into<String>, sign: Polarity) -> Self {
        Self { constraint: ConstraintId(constraint.into()), sign }
    }

    pub fn pos(constraint: impl Into<String>) -> Self {
        Self::new(constraint, Polarity::Positive)
    }

    pub fn neg(constraint: impl Into<String>) -> Self {
        Self::new(constraint, Polarity::Negative)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.constraint, self.sign.symbol())
    }
}

/// Where a derivation rule may be applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleSource {
    Radical(RadicalId),
    Family(Family),
}

/// A schematic stroke edit applied by a derivation rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "edit", rename_all = "kebab-case")]
pub enum StrokeEdit {
    /// Dots grow into a segment towards `center + delta`; lines move their last point by `delta`.
    ExtendStroke { stroke: String, dx: f64, dy: f64 },
    AddStroke { stroke: Stroke },
    ReplaceStrokes { targets: Vec<String>, with: Vec<Stroke> },
    AddCenterCircle { name: String, radius: f64 },
    /// Removes the targets and adds a horizontal bar of half-width `half` through the centre.
    CrossTransform { targets: Vec<String>, half: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationRule {
    pub id: RuleId,
    pub name: String,
    pub source: RuleSource,
    /// Rules that must already be applied (on the glyph or an embedded sub-glyph).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requires: Vec<RuleId>,
    pub edits: Vec<StrokeEdit>,
    pub adds: Vec<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_concept: Option<ConceptId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: ConceptId,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub area: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cryptomorphism_group: Option<String>,
}

/// What a region of a glyph holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fill {
    Absent,
    Mark(MarkId),
    /// An embedded sub-glyph (structure glyph placed inside a topological one).
    Glyph(Box<Glyph>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegionFill {
    pub region: String,
    pub fill: Fill,
}

/// Region scale factor, stored in thousandths so glyphs stay hashable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Scale(pub u32);

impl Scale {
    pub const IDENTITY: Scale = Scale(1000);

    /// Rounds to the nearest thousandth; `None` for non-positive or non-finite input.
    pub fn from_f64(v: f64) -> Option<Scale> {
        if !v.is_finite() || v <= 0.0 {
            return None;
        }
        let milli = (v * 1000.0).round();
        if milli < 1.0 || milli > u32::MAX as f64 {
            return None;
        }
        Some(Scale(milli as u32))
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 1000.0
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Expansion {
    pub region: String,
    pub scale: Scale,
}

/// A radical plus a fill per region, applied derivation rules and visual state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Glyph {
    pub radical: RadicalId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assignment: Vec<RegionFill>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<RuleId>,
    /// Limit file suppressed.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub abbreviated: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expansions: Vec<Expansion>,
}

impl Glyph {
    /// The all-absent glyph of a radical.
    pub fn bare(radical: impl Into<RadicalId>) -> Self {
        Glyph {
            radical: radical.into(),
            assignment: Vec::new(),
            derivations: Vec::new(),
            abbreviated: false,
            expansions: Vec::new(),
        }
    }

    /// Builder helper: sets `region` to `mark`, replacing an existing entry.
    pub fn with_mark(mut self, region: &str, mark: &str) -> Self {
        self.set_fill(region, Fill::Mark(MarkId::new(mark)));
        self
    }

    pub fn with_rule(mut self, rule: &str) -> Self {
        self.derivations.push(RuleId::new(rule));
        self
    }

    pub fn fill(&self, region: &str) -> Option<&Fill> {
        self.assignment.iter().rev().find(|e| e.region == region).map(|e| &e.fill)
    }

    pub(crate) fn set_fill(&mut self, region: &str, fill: Fill) {
        match self.assignment.iter_mut().find(|e| e.region == region) {
            Some(entry) => entry.fill = fill,
            None => self.assignment.push(RegionFill { region: region.to_owned(), fill }),
        }
    }

    pub fn embedded(&self) -> impl Iterator<Item = (&str, &Glyph)> {
        self.assignment.iter().filter_map(|e| match &e.fill {
            Fill::Glyph(g) => Some((e.region.as_str(), g.as_ref())),
            _ => None,
        })
    }

    /// Levels of embedding below this glyph: 0 for a plain glyph.
    pub fn nesting_depth(&self) -> usize {
        self.embedded().map(|(_, g)| 1 + g.nesting_depth()).max().unwrap_or(0)
    }

    /// Rules applied to this glyph or to any embedded sub-glyph.
    pub fn all_rules(&self) -> Vec<&RuleId> {
        let mut out: Vec<&RuleId> = self.derivations.iter().collect();
        for (_, sub) in self.embedded() {
            out.extend(sub.all_rules());
        }
        out
    }
}

impl From<&str> for Glyph {
    fn from(radical: &str) -> Self {
        Glyph::bare(radical)
    }
}

impl From<RadicalId> for Glyph {
    fn from(radical: RadicalId) -> Self {
        Glyph::bare(radical)
    }
}

/// An entry of the meaning map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub glyph: Glyph,
    pub concept: ConceptId,
    #[serde(default)]
    pub precedence: bool,
}

/// A complete, not yet validated, set of definitions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Definitions {
    pub constraints: Vec<PropertyConstraint>,
    pub marks: Vec<Mark>,
    pub radicals: Vec<Radical>,
    pub rules: Vec<DerivationRule>,
    pub concepts: Vec<Concept>,
    pub bindings: Vec<Binding>,
}

/// A finite carrier with a subset valuation per constraint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseModel {
    pub carrier: std::collections::BTreeSet<String>,
    pub valuation: std::collections::BTreeMap<ConstraintId, std::collections::BTreeSet<String>>,
}

impl UniverseModel {
    /// A model over `carrier` with no valuations yet.
    pub fn new<I, S>(carrier: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        UniverseModel {
            carrier: carrier.into_iter().map(Into::into).collect(),
            valuation: Default::default(),
        }
    }

    pub fn with_valuation<I, S>(mut self, constraint: &str, members: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: std::collections::BTreeSet<String> = members.into_iter().map(Into::into).collect();
        if let Some(stray) = set.iter().find(|m| !self.carrier.contains(*m)) {
            return Err(format!("valuation of `{constraint}` contains `{stray}` outside the carrier"));
        }
        self.valuation.insert(ConstraintId::new(constraint), set);
        Ok(self)
    }
}
