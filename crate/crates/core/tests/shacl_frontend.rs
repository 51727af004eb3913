mod common;

use common::*;
use shapes_core::rdf::vocab::{rdf, rdfs, sh, xsd};
use shapes_core::rdf::{parse_turtle, Graph, Iri};
use shapes_core::schemas;
use shapes_core::shacl::{load_shacl, scope_targets, NodeConstraint, ShaclError, ShaclSchema};
use shapes_core::shape::ShapeLabel;

const GOLDEN: &str = include_str!("golden/webindex_shacl.dump");

const HEADER: &str = "@prefix : <http://example.org/> .\n\
    @prefix sh: <http://www.w3.org/ns/shacl#> .\n\
    @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
    @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";

fn load(body: &str) -> Result<ShaclSchema, ShaclError> {
    load_shacl(&parse_turtle(&format!("{HEADER}{body}")).unwrap()).map(|(s, _)| s)
}

#[test]
fn webindex_dump_matches_golden() {
    let g = parse_turtle(schemas::WEBINDEX_SHACL).unwrap();
    assert_eq!(g.len(), 202);
    let (schema, warnings) = load_shacl(&g).unwrap();
    assert!(warnings.is_empty(), "{warnings:?}");
    assert_eq!(schema.dump(), GOLDEN);
}

#[test]
fn seven_named_shapes() {
    let schema = shacl();
    let mut names: Vec<ShapeLabel> = schemas::SHAPE_NAMES.iter().map(|n| label(n)).collect();
    names.sort();
    assert_eq!(schema.named, names);
}

#[test]
fn country_properties() {
    let schema = shacl();
    let country = schema.get(&label("Country")).unwrap();
    let preds: Vec<&str> = country.properties.iter().map(|p| p.predicate.as_str()).collect();
    assert_eq!(preds.len(), 2);
    assert!(preds.contains(&rdfs::LABEL));
    for p in &country.properties {
        assert_eq!(p.datatype, Some(Iri::new(xsd::STRING)));
        assert_eq!((p.min_count, p.max_count), (1, Some(1)));
    }
}

#[test]
fn observation_exclusive_or_and_closed_organization() {
    let schema = shacl();
    let obs = schema.get(&label("Observation")).unwrap();
    let or = obs.node_constraints.iter().find_map(|c| match c {
        NodeConstraint::Or(ls) => Some(ls.clone()),
        _ => None,
    });
    let not = obs.node_constraints.iter().find_map(|c| match c {
        NodeConstraint::Not(l) => Some(l.clone()),
        _ => None,
    });
    let (or, not) = (or.unwrap(), not.unwrap());
    assert_eq!(or.len(), 2);
    let inner = schema.get(&not).unwrap();
    let [NodeConstraint::And(and)] = inner.node_constraints.as_slice() else { panic!("{inner:?}") };
    // the branches are written twice as separate blank nodes with equal content
    let contents = |ls: &[ShapeLabel]| ls.iter().map(|l| schema.get(l).unwrap().clone()).collect::<Vec<_>>();
    assert_eq!(contents(and), contents(&or));
    assert_eq!(obs.properties.iter().filter(|p| p.qualified.is_some()).count(), 2);
    assert_eq!(obs.properties.iter().filter(|p| p.filter_shape.is_some()).count(), 1);

    let org = schema.get(&label("Organization")).unwrap();
    let ignored = org.node_constraints.iter().find_map(|c| match c {
        NodeConstraint::Closed { ignored } => Some(ignored.clone()),
        _ => None,
    });
    assert_eq!(ignored.unwrap().into_iter().collect::<Vec<_>>(), vec![Iri::new(rdf::TYPE)]);
}

#[test]
fn empty_graph_has_no_shapes() {
    let (schema, warnings) = load_shacl(&Graph::empty()).unwrap();
    assert!(schema.named.is_empty() && schema.shapes.is_empty() && warnings.is_empty());
}

#[test]
fn scopes_select_nodes_then_classes() {
    let schema = load(
        ":S a sh:Shape ; sh:scopeNode :x ; sh:scopeClass :C .\n\
         :T sh:scopeNode :x .",
    )
    .unwrap();
    let data = parse_turtle("@prefix : <http://example.org/> .\n:y a :C .\n:x a :C .").unwrap();
    let got = scope_targets(&schema, &data);
    let s = label("S");
    let t = label("T");
    assert_eq!(got, vec![(ex("x"), s.clone()), (ex("x"), t), (ex("y"), s)]);
}

#[test]
fn unsupported_terms_warn() {
    let g = parse_turtle(&format!(
        "{HEADER}:S a sh:Shape ; sh:property [ sh:predicate :p ; sh:pattern \"a+\" ; sh:minCount 1 ] ."
    ))
    .unwrap();
    let (schema, warnings) = load_shacl(&g).unwrap();
    assert_eq!(warnings.len(), 1);
    assert_eq!(warnings[0].term, Iri::new(format!("{}pattern", sh::NS)));
    assert_eq!(schema.get(&label("S")).unwrap().properties[0].min_count, 1);
}

#[test]
fn malformed_inputs_are_errors() {
    let broken_list = load(":S a sh:Shape ; sh:property [ sh:predicate :p ; sh:in [ rdf:first :a ] ] .");
    assert!(matches!(broken_list, Err(ShaclError::MalformedList(_))), "{broken_list:?}");
    let no_pred = load(":S a sh:Shape ; sh:property [ sh:minCount 1 ] .");
    assert!(matches!(no_pred, Err(ShaclError::MissingPredicate { .. })), "{no_pred:?}");
    let bad_count = load(":S a sh:Shape ; sh:property [ sh:predicate :p ; sh:minCount \"one\" ] .");
    assert!(matches!(bad_count, Err(ShaclError::BadCount { .. })), "{bad_count:?}");
    let undefined = load(":S a sh:Shape ; sh:property [ sh:predicate :p ; sh:valueShape :Missing ] .");
    assert_eq!(undefined.unwrap_err(), ShaclError::UndefinedShape(label("Missing")));
}

#[test]
fn negation_cycles_are_rejected() {
    let cyclic = load(
        ":S a sh:Shape ; sh:constraint [ a sh:NotConstraint ; sh:shape :T ] .\n\
         :T a sh:Shape ; sh:property [ sh:predicate :p ; sh:valueShape :S ] .",
    );
    assert!(matches!(cyclic, Err(ShaclError::NegationCycle(_))), "{cyclic:?}");
    let positive = load(
        ":S a sh:Shape ; sh:property [ sh:predicate :p ; sh:valueShape :T ] .\n\
         :T a sh:Shape ; sh:property [ sh:predicate :p ; sh:valueShape :S ] .",
    );
    assert!(positive.is_ok());
}

#[test]
fn nonrecursive_variant_scopes_every_shape() {
    let g = parse_turtle(schemas::WEBINDEX_NONREC_SHACL).unwrap();
    let (schema, warnings) = load_shacl(&g).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(schema.scopes.class_scopes.len(), 8);
    assert!(schema.shapes.values().all(|s| s.properties.iter().all(|p| p.value_shape.is_none())));
}
