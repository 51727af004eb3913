mod common;

use common::*;
use proptest::prelude::*;
use shapes_core::shape::{Cardinality, NodeConstraint, Shape, ShapeExpr, TripleExpr};
use shapes_core::validate::{
    brute_force_match, brute_force_match_bounded, match_neighbourhood, Neighbourhood, OracleError,
};

const P: &str = "http://example.org/p";
const Q: &str = "http://example.org/q";

fn any() -> ShapeExpr {
    ShapeExpr::NodeConstraint(NodeConstraint::wildcard())
}

fn open(expr: TripleExpr) -> Shape {
    Shape { expr: Some(expr), ..Default::default() }
}

fn out(arcs: &[(&str, &str)]) -> Neighbourhood {
    Neighbourhood { out: arcs.iter().map(|(p, o)| t(focus(), p, ex(o))).collect(), inn: Vec::new() }
}

fn both(neigh: &Neighbourhood, shape: &Shape) -> (bool, bool) {
    let fast = match_neighbourhood(neigh, shape, &mut node_value);
    let slow = brute_force_match(neigh, shape, &mut node_value).unwrap();
    (fast, slow)
}

#[test]
fn empty_bag_against_optional() {
    let shape = open(TripleExpr::tc(P, any(), Cardinality::OPTIONAL));
    assert_eq!(both(&Neighbourhood::default(), &shape), (true, true));
}

#[test]
fn second_value_left_unmatched_fails() {
    let shape = open(TripleExpr::tc(P, any(), Cardinality::ONE));
    assert_eq!(both(&out(&[(P, "x"), (P, "y")]), &shape), (false, false));
}

#[test]
fn each_of_needs_both_one_of_allows_one() {
    let n = out(&[(P, "x"), (Q, "y")]);
    let tcs = || vec![TripleExpr::tc(P, any(), Cardinality::ONE), TripleExpr::tc(Q, any(), Cardinality::ONE)];
    assert_eq!(both(&n, &open(TripleExpr::each_of(tcs()))), (true, true));
    assert_eq!(both(&n, &open(TripleExpr::one_of(tcs()))), (false, false));
}

#[test]
fn extra_predicate_may_stay_unmatched() {
    let mut shape =
        open(TripleExpr::tc(P, ShapeExpr::NodeConstraint(NodeConstraint::value_set([ex("x")])), Cardinality::ONE));
    let n = out(&[(P, "x"), (P, "y")]);
    assert_eq!(both(&n, &shape), (false, false));
    shape.extra.insert(shapes_core::rdf::Iri::new(P));
    assert_eq!(both(&n, &shape), (true, true));
}

#[test]
fn group_repetition_splits_counts() {
    // (p, q){2} accepts two p and two q but not two p and one q
    let group = TripleExpr::EachOf {
        exprs: vec![TripleExpr::tc(P, any(), Cardinality::ONE), TripleExpr::tc(Q, any(), Cardinality::ONE)],
        card: Cardinality::new(2, Some(2)),
    };
    let shape = open(group);
    assert_eq!(both(&out(&[(P, "a"), (P, "b"), (Q, "a"), (Q, "b")]), &shape), (true, true));
    assert_eq!(both(&out(&[(P, "a"), (P, "b"), (Q, "a")]), &shape), (false, false));
}

#[test]
fn bound_is_enforced() {
    let arcs: Vec<(&str, String)> = (0..9).map(|i| (P, format!("v{i}"))).collect();
    let n = Neighbourhood { out: arcs.iter().map(|(p, o)| t(focus(), p, ex(o))).collect(), inn: Vec::new() };
    let shape = open(TripleExpr::tc(P, any(), Cardinality::STAR));
    assert_eq!(brute_force_match(&n, &shape, &mut node_value), Err(OracleError::BoundExceeded { size: 9, bound: 8 }));
    assert_eq!(brute_force_match_bounded(&n, &shape, &mut node_value, 9), Ok(true));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn matcher_agrees_with_brute_force(shape in shape(), neigh in neighbourhood()) {
        let (fast, slow) = both(&neigh, &shape);
        prop_assert_eq!(fast, slow);
    }
}
