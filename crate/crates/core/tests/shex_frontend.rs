mod common;

use common::*;
use proptest::prelude::*;
use shapes_core::schemas;
use shapes_core::shape::{resolve_inclusions, well_formed, ShapeExpr, ShapeLabel};
use shapes_core::shexc::{parse_shexc, parse_shexc_document, serialize_shexc, ShexError};

#[test]
fn webindex_schema_matches_hand_built_ast() {
    let schema = shex();
    let got: Vec<(ShapeLabel, ShapeExpr)> = schema.shapes.clone().into_iter().collect();
    let expected = expected_webindex();
    assert_eq!(got.len(), 7);
    for (g, e) in got.iter().zip(&expected) {
        assert_eq!(g, e, "shape {}", e.0);
    }
    assert!(well_formed(&schema).is_empty());
    assert_eq!(resolve_inclusions(&schema).unwrap(), schema);
}

#[test]
fn nonrecursive_variant_has_no_references() {
    let schema = parse_shexc(schemas::WEBINDEX_NONREC_SHEX).unwrap();
    assert!(well_formed(&schema).is_empty());
    let mut refs = 0;
    for e in schema.shapes.values() {
        e.visit_refs(false, &mut |_, _| refs += 1);
    }
    assert_eq!(refs, 0);
    assert_eq!(schema.shapes.len(), 7);
}

#[test]
fn webindex_round_trips() {
    let schema = shex();
    let text = serialize_shexc(&schema);
    assert_eq!(parse_shexc(&text).unwrap(), schema);
}

#[test]
fn document_spans_cover_each_shape() {
    let doc = parse_shexc_document(schemas::WEBINDEX_SHEX).unwrap();
    let span = &doc.spans[&label("Computation")];
    assert_eq!(span.start, (43, 1));
    assert_eq!(span.end, (43, 40));
    assert!(doc.warnings.is_empty());
}

#[test]
fn errors_carry_positions() {
    match parse_shexc("prefix : <http://example.org/>\n:S { foo:p . }") {
        Err(ShexError::UndefinedPrefix { prefix, line, .. }) => assert_eq!((prefix.as_str(), line), ("foo", 2)),
        other => panic!("{other:?}"),
    }
    match parse_shexc("prefix : <http://example.org/>\n:S { :p . , | :q . }") {
        Err(ShexError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn random_schemas_round_trip(s in random_schema()) {
        let text = serialize_shexc(&s);
        let back = parse_shexc(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, s, "{}", text);
    }
}
