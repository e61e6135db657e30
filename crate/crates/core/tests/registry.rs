use vtt_core::model::*;
use vtt_core::registry::{Entity, EntityKind, LookupError, RegistryErrorKind};
use vtt_core::{seed, Registry};

#[test]
fn empty_definitions_give_empty_registry() {
    let r = Registry::new(Definitions::default()).unwrap();
    assert!(r.radicals().is_empty());
}

#[test]
fn seed_has_every_basic_radical() {
    let r = seed::registry();
    let keyed = r.radicals().iter().filter(|x| x.table1_key.is_some()).count();
    assert!(keyed >= 23, "{keyed}");
}

#[test]
fn binding_to_unknown_concept_dangles() {
    let mut d = seed::definitions();
    d.bindings.push(Binding { glyph: Glyph::bare("bar2"), concept: "no-such-concept".into(), precedence: false });
    let err = Registry::new(d).unwrap_err();
    assert_eq!(
        err.kind,
        RegistryErrorKind::Dangling { kind: EntityKind::Concept, id: "no-such-concept".into() }
    );
}

#[test]
fn lookup_by_kind() {
    let r = seed::registry();
    match r.get(EntityKind::Radical, "set").unwrap() {
        Entity::Radical(x) => assert_eq!(x.schema.len(), 2),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        r.get(EntityKind::Radical, "nonexistent").unwrap_err(),
        LookupError::NotFound { kind: EntityKind::Radical, id: "nonexistent".into() }
    );
    match r.get(EntityKind::Concept, "hilbert-space").unwrap() {
        Entity::Concept(c) => assert_eq!(c.name, "Hilbert space"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(r.get(EntityKind::Mark, "not an id"), Err(LookupError::MalformedId(_))));
}

#[test]
fn overload_is_rejected_unless_lenient() {
    let mut d = seed::definitions();
    d.concepts.push(Concept {
        id: "impostor".into(),
        name: "impostor".into(),
        aliases: vec![],
        area: "test".into(),
        cryptomorphism_group: None,
    });
    d.bindings.push(Binding {
        glyph: Glyph::bare("hausdorff").with_mark("center", "dot"),
        concept: "impostor".into(),
        precedence: false,
    });
    let err = Registry::new(d.clone()).unwrap_err();
    assert!(matches!(err.kind, RegistryErrorKind::Overload { .. }), "{err}");
    assert!(Registry::new_lenient(d).is_ok());
}
