use std::fmt;

use serde::Serialize;

use crate::model::MarkShape;

/// A coordinate in thousandths of a pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Q(pub i64);

impl Q {
    pub fn from_f64(v: f64) -> Q {
        // normalise -0 and tiny negatives to 0
        let q = (v * 1000.0).round() as i64;
        Q(q)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }
}

impl fmt::Display for Q {
    /// Decimal with up to three fractional digits, trailing zeros trimmed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        let (int, frac) = (a / 1000, a % 1000);
        if frac == 0 {
            write!(f, "{sign}{int}")
        } else {
            let s = format!("{frac:03}");
            write!(f, "{sign}{int}.{}", s.trim_end_matches('0'))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QPoint {
    pub x: Q,
    pub y: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Path {
    Polyline { points: Vec<QPoint> },
    /// Circular arc from `from` to `to`, drawn clockwise on screen.
    Arc { from: QPoint, to: QPoint, radius: Q, large: bool },
    Circle { center: QPoint, radius: Q },
    /// Filled disc.
    Disc { center: QPoint, radius: Q },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Prim {
    Stroke { name: String, path: Path, width: Q },
    Mark { shape: MarkShape, center: QPoint, radius: Q, width: Q },
    /// Frame of an embedded sub-glyph.
    Frame { x: Q, y: Q, w: Q, h: Q, width: Q },
    Label { at: QPoint, text: String, size: Q },
}

/// Positioned vector primitives with a `0 0 width height` view box.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Geometry {
    pub width: Q,
    pub height: Q,
    pub prims: Vec<Prim>,
}

impl Geometry {
    pub fn strokes(&self) -> impl Iterator<Item = (&str, &Path)> {
        self.prims.iter().filter_map(|p| match p {
            Prim::Stroke { name, path, .. } => Some((name.as_str(), path)),
            _ => None,
        })
    }

    pub fn marks(&self) -> impl Iterator<Item = (MarkShape, QPoint, Q)> + '_ {
        self.prims.iter().filter_map(|p| match p {
            Prim::Mark { shape, center, radius, .. } => Some((*shape, *center, *radius)),
            _ => None,
        })
    }

    pub fn frames(&self) -> impl Iterator<Item = &Prim> {
        self.prims.iter().filter(|p| matches!(p, Prim::Frame { .. }))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.prims.iter().filter_map(|p| match p {
            Prim::Label { text, .. } => Some(text.as_str()),
            _ => None,
        })
    }
}

/// Affine map from a unit box onto a target rectangle, in unit coordinates of
/// the outer document.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Frame {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Frame {
    pub const UNIT: Frame = Frame { x: 0.0, y: 0.0, w: 1.0, h: 1.0 };

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.x + x * self.w, self.y + y * self.h)
    }

    pub fn scale(&self) -> f64 {
        self.w.min(self.h)
    }

    pub fn inner(&self, x: f64, y: f64, w: f64, h: f64) -> Frame {
        let (ox, oy) = self.map(x, y);
        Frame { x: ox, y: oy, w: w * self.w, h: h * self.h }
    }
}

/// Collects primitives in unit coordinates and quantizes them at the end.
pub(crate) struct Builder {
    pub prims: Vec<UPrim>,
}

#[derive(Clone, Debug)]
pub(crate) enum UPath {
    Polyline(Vec<(f64, f64)>),
    Arc { from: (f64, f64), to: (f64, f64), radius: f64, large: bool },
    Circle { center: (f64, f64), radius: f64 },
    Disc { center: (f64, f64), radius: f64 },
}

#[derive(Clone, Debug)]
pub(crate) enum UPrim {
    Stroke { name: String, path: UPath, width: f64 },
    Mark { shape: MarkShape, center: (f64, f64), radius: f64, width: f64 },
    Frame { frame: Frame, width: f64 },
    Label { at: (f64, f64), text: String, size: f64 },
}

impl Builder {
    pub fn new() -> Self {
        Builder { prims: Vec::new() }
    }

    pub fn finish(self, width: f64, height: f64, size: u32) -> Geometry {
        let s = f64::from(size);
        let q = |v: f64| Q::from_f64(v * s);
        let qp = |(x, y): (f64, f64)| QPoint { x: q(x), y: q(y) };
        let prims = self
            .prims
            .into_iter()
            .map(|p| match p {
                UPrim::Stroke { name, path, width } => Prim::Stroke {
                    name,
                    width: q(width),
                    path: match path {
                        UPath::Polyline(pts) => Path::Polyline { points: pts.into_iter().map(qp).collect() },
                        UPath::Arc { from, to, radius, large } => {
                            Path::Arc { from: qp(from), to: qp(to), radius: q(radius), large }
                        }
                        UPath::Circle { center, radius } => Path::Circle { center: qp(center), radius: q(radius) },
                        UPath::Disc { center, radius } => Path::Disc { center: qp(center), radius: q(radius) },
                    },
                },
                UPrim::Mark { shape, center, radius, width } => {
                    Prim::Mark { shape, center: qp(center), radius: q(radius), width: q(width) }
                }
                UPrim::Frame { frame, width } => Prim::Frame {
                    x: q(frame.x),
                    y: q(frame.y),
                    w: q(frame.w),
                    h: q(frame.h),
                    width: q(width),
                },
                UPrim::Label { at, text, size } => Prim::Label { at: qp(at), text, size: q(size) },
            })
            .collect();
        Geometry { width: q(width), height: q(height), prims }
    }
}
