//! The bundled definition corpus: the basic radicals, their derivation
//! rules and the meaning map over them.

use crate::dsl;
use crate::model::Definitions;
use crate::registry::Registry;

/// Source text of the bundled corpus.
pub const SOURCE: &str = include_str!("../data/seed.vtt");

/// Order-theoretic duality between bounded distributive lattices and
/// Priestley spaces, written in expression notation.
pub const PRIESTLEY: &str =
    "arrow(bounded-distributive-lattice | bounded-distributive-lattice) ≈ oparrow(priestley-space | priestley-space)";

pub fn definitions() -> Definitions {
    let ast = dsl::parse(SOURCE).expect("bundled corpus parses");
    dsl::definitions(&ast, None)
}

pub fn registry() -> Registry {
    Registry::new(definitions()).expect("bundled corpus is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_contains_the_duality() {
        let ast = dsl::parse(SOURCE).unwrap();
        let printed: Vec<String> = ast
            .expressions()
            .filter_map(|i| match &i.node {
                dsl::Item::Expr(e) => Some(dsl::print_expression(e)),
                _ => None,
            })
            .collect();
        assert_eq!(printed, [PRIESTLEY]);
    }
}
