//! Small synthetic definition sets, handy for tests and demos.

use crate::model::*;

/// A single `other`-family radical `bar` with `n` side-by-side regions
/// `r0..r{n-1}`, each loaded with a negatable constraint `c{i}`, plus the
/// two-mark vocabulary `dot` (positive) and `circle` (negative).
pub fn membership_bar(n: usize) -> Definitions {
    let width = 1.0 / n.max(1) as f64;
    let constraints = (0..n)
        .map(|i| PropertyConstraint {
            id: ConstraintId(format!("c{i}")),
            name: format!("in class {i}"),
            statement: String::new(),
            negatable: true,
        })
        .collect();
    let regions = (0..n)
        .map(|i| Region {
            name: format!("r{i}"),
            constraint: ConstraintId(format!("c{i}")),
            anchor: Point::new(width * (i as f64 + 0.5), 0.5),
            extent: Extent { w: width * 0.8, h: 0.3 },
            expandable: false,
        })
        .collect();
    Definitions {
        constraints,
        marks: two_marks(),
        radicals: vec![Radical {
            id: "bar".into(),
            name: "bar".into(),
            family: Family::Other,
            derives_from: None,
            table1_key: None,
            strokes: vec![Stroke {
                name: "bar".into(),
                shape: Shape::Line { points: vec![Point::new(0.05, 0.5), Point::new(0.95, 0.5)] },
                group: None,
                weight: Weight::Regular,
            }],
            schema: RegionSchema::new(regions),
            limit_file: None,
            baseline: Vec::new(),
            asymmetry: 0.0,
        }],
        rules: Vec::new(),
        concepts: Vec::new(),
        bindings: Vec::new(),
    }
}

/// `dot` for positive literals, `circle` for negative ones.
pub fn two_marks() -> Vec<Mark> {
    vec![
        Mark { id: "dot".into(), polarity: Polarity::Positive, shape: MarkShape::Dot },
        Mark { id: "circle".into(), polarity: Polarity::Negative, shape: MarkShape::Circle },
    ]
}

/// A concept whose name is its id.
pub fn concept(id: &str) -> Concept {
    Concept {
        id: id.into(),
        name: id.to_owned(),
        aliases: Vec::new(),
        area: "test".into(),
        cryptomorphism_group: None,
    }
}
