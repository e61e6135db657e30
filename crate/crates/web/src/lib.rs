//! Browser entry points for the composer demo. Every function takes and
//! returns JSON text so the page needs no generated type bindings.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Deserialize;
use serde_json::{json, Value};
use vtt_core::compose::{self, describe, ComposeRequest};
use vtt_core::dsl::parse_glyph_literal;
use vtt_core::semantics::denote;
use vtt_core::{canonicalize, seed, Glyph, Registry, UniverseModel};
use wasm_bindgen::prelude::*;

/// Largest carrier the four-class explorer accepts.
pub const MAX_UNIVERSE: u32 = 24;

fn registry() -> &'static Registry {
    static SEED: OnceLock<Registry> = OnceLock::new();
    SEED.get_or_init(seed::registry)
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Radicals with their regions and applicable rules.
#[wasm_bindgen]
pub fn radicals() -> String {
    let r = registry();
    let list: Vec<Value> = r
        .radicals()
        .iter()
        .map(|rad| {
            let regions: Vec<Value> = rad
                .schema
                .regions
                .iter()
                .map(|reg| {
                    let negatable = r.constraint(&reg.constraint).is_some_and(|c| c.negatable);
                    json!({ "name": reg.name, "negatable": negatable })
                })
                .collect();
            let rules: Vec<Value> = r
                .rules_for(rad)
                .map(|rule| json!({ "id": rule.id.as_str(), "name": rule.name, "requires": rule.requires }))
                .collect();
            json!({ "id": rad.id.as_str(), "name": rad.name, "family": rad.family.keyword(), "regions": regions, "rules": rules })
        })
        .collect();
    Value::from(list).to_string()
}

/// Same request and response shapes as the service's `POST /compose`.
#[wasm_bindgen]
pub fn compose(request: &str) -> String {
    let req: ComposeRequest = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    match compose::compose(&req, registry()) {
        Ok(resp) => serde_json::to_string(&resp).expect("responses serialize"),
        Err(e) => error(e),
    }
}

/// Reads a glyph literal such as `hausdorff(center=dot)`.
#[wasm_bindgen]
pub fn lookup(literal: &str, size: u32) -> String {
    let r = registry();
    let glyph = match parse_glyph_literal(literal) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    if let Err(e) = r.validate_glyph(&glyph) {
        return error(e);
    }
    match describe(&canonicalize(&glyph, r), size, r) {
        Ok(resp) => serde_json::to_string(&resp).expect("responses serialize"),
        Err(e) => error(e),
    }
}

#[derive(Deserialize)]
struct FourClassInput {
    universe: u32,
    a: Vec<u32>,
    b: Vec<u32>,
    #[serde(default = "default_size")]
    size: u32,
}

fn default_size() -> u32 {
    96
}

/// The four fully-marked membership-bar glyphs over `{1..universe}` with
/// `in-a` read as `a` and `in-b` as `b`: each glyph's SVG, literals and
/// denotation, plus whether the four denotations partition the carrier.
#[wasm_bindgen]
pub fn four_classes(input: &str) -> String {
    let inp: FourClassInput = match serde_json::from_str(input) {
        Ok(i) => i,
        Err(e) => return error(e),
    };
    if inp.universe == 0 || inp.universe > MAX_UNIVERSE {
        return error(format!("universe must have between 1 and {MAX_UNIVERSE} elements"));
    }
    let carrier: Vec<String> = (1..=inp.universe).map(|i| i.to_string()).collect();
    let set = |xs: &[u32]| -> Vec<String> { xs.iter().map(|x| x.to_string()).collect() };
    let model = UniverseModel::new(carrier.clone())
        .with_valuation("in-a", set(&inp.a))
        .and_then(|m| m.with_valuation("in-b", set(&inp.b)));
    let model = match model {
        Ok(m) => m,
        Err(e) => return error(e),
    };
    let r = registry();
    let cases = [("circle", "dot", "B \\ A"), ("dot", "circle", "A \\ B"), ("dot", "dot", "A ∩ B"), ("circle", "circle", "U \\ (A ∪ B)")];
    let mut classes = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut disjoint = true;
    for (ma, mb, label) in cases {
        let g = Glyph::bare("bar2").with_mark("a", ma).with_mark("b", mb);
        let resp = match describe(&g, inp.size, r) {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let members = match denote(&g, &model, r) {
            Ok(m) => m,
            Err(e) => return error(e),
        };
        for m in &members {
            disjoint &= seen.insert(m.clone());
        }
        let members: Vec<u32> = members.iter().map(|m| m.parse().expect("numeric carrier")).collect();
        classes.push(json!({
            "glyph": resp.canonical_text,
            "label": label,
            "constraints": resp.constraints,
            "svg": resp.svg,
            "members": sorted(members),
        }));
    }
    let covers = seen.len() == carrier.len();
    json!({ "classes": classes, "disjoint": disjoint, "covers": covers }).to_string()
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}
