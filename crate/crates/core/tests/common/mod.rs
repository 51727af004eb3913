#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use shapes_core::rdf::vocab::{rdf, rdfs, standard_prefixes, wi, xsd};
use shapes_core::rdf::{parse_turtle, Graph, Iri, Literal, RdfTerm, Triple};
use shapes_core::schemas;
use shapes_core::shacl::{load_shacl, ShaclSchema};
use shapes_core::shape::{
    Cardinality, NodeConstraint, NodeKind, Schema, Shape, ShapeExpr, ShapeLabel, TripleConstraint, TripleExpr,
};
use shapes_core::shexc::parse_shexc;
use shapes_core::validate::{brute_force_match, Neighbourhood};
use shapes_core::wigen::{GenConfig, ShapeKind};

pub fn ex(local: &str) -> RdfTerm {
    RdfTerm::iri(format!("{}{local}", wi::EX))
}

pub fn t(s: RdfTerm, p: &str, o: RdfTerm) -> Triple {
    Triple::new(s, Iri::new(p), o).unwrap()
}

pub fn label(name: &str) -> ShapeLabel {
    ShapeLabel::iri(schemas::shape_iri(name))
}

pub fn sample() -> Graph {
    parse_turtle(schemas::WEBINDEX_SAMPLE).unwrap()
}

pub fn shex() -> Schema {
    parse_shexc(schemas::WEBINDEX_SHEX).unwrap()
}

pub fn shacl() -> ShaclSchema {
    load_shacl(&parse_turtle(schemas::WEBINDEX_SHACL).unwrap()).unwrap().0
}

/// The sample graph with its triples about `subject` on `predicate` replaced.
pub fn edit(g: &Graph, subject: &RdfTerm, predicate: &str, objects: &[RdfTerm]) -> Graph {
    let mut ts: Vec<Triple> =
        g.iter().filter(|t| !(&t.subject == subject && t.predicate.as_str() == predicate)).cloned().collect();
    for o in objects {
        ts.push(t(subject.clone(), predicate, o.clone()));
    }
    Graph::new(ts, g.prefixes().to_vec())
}

pub fn add(g: &Graph, subject: &RdfTerm, predicate: &str, object: RdfTerm) -> Graph {
    let mut ts: Vec<Triple> = g.iter().cloned().collect();
    ts.push(t(subject.clone(), predicate, object));
    Graph::new(ts, g.prefixes().to_vec())
}

/// The (node, shape) pairs the sample graph is built to satisfy.
pub fn sample_pairs() -> Vec<(RdfTerm, ShapeLabel)> {
    [
        ("Spain", "Country"),
        ("ITU", "Organization"),
        ("ITU_B", "Indicator"),
        ("obs8165", "Observation"),
        ("DITU", "DataSet"),
        ("ITU09B", "Slice"),
        ("comp234", "Computation"),
    ]
    .iter()
    .map(|(n, s)| (ex(n), label(s)))
    .collect()
}

// ---- random neighbourhoods and triple expressions ----

pub const PREDS: [&str; 3] = ["http://example.org/p", "http://example.org/q", "http://example.org/r"];

pub fn focus() -> RdfTerm {
    ex("f")
}

fn value_term(i: usize) -> RdfTerm {
    match i {
        0 => ex("a"),
        1 => ex("b"),
        _ => RdfTerm::string("x"),
    }
}

pub fn value_expr() -> impl Strategy<Value = ShapeExpr> {
    prop_oneof![
        Just(NodeConstraint::wildcard()),
        Just(NodeConstraint::value_set([ex("a")])),
        Just(NodeConstraint::value_set([ex("a"), ex("b")])),
        Just(NodeConstraint::kind(NodeKind::Literal)),
        Just(NodeConstraint::kind(NodeKind::Iri)),
    ]
    .prop_map(ShapeExpr::NodeConstraint)
}

pub fn card() -> impl Strategy<Value = Cardinality> {
    (0u32..=2, prop::option::of(0u32..=2)).prop_map(|(min, extra)| Cardinality::new(min, extra.map(|e| min + e)))
}

pub fn triple_constraint() -> impl Strategy<Value = TripleExpr> {
    (0..PREDS.len(), value_expr(), card(), prop::bool::weighted(0.2), prop::bool::weighted(0.1)).prop_map(
        |(p, value, card, inverse, negated)| {
            let mut tc = TripleConstraint::new(PREDS[p], value, card);
            tc.inverse = inverse;
            tc.negated = negated;
            TripleExpr::Constraint(tc)
        },
    )
}

/// Triple expressions at most three levels deep.
pub fn triple_expr() -> impl Strategy<Value = TripleExpr> {
    triple_constraint().prop_recursive(2, 12, 3, |inner| {
        (prop::collection::vec(inner, 1..=3), card(), any::<bool>()).prop_map(|(exprs, card, each)| {
            // a one-child group is written the same way either way
            if each || exprs.len() == 1 {
                TripleExpr::EachOf { exprs, card }
            } else {
                TripleExpr::OneOf { exprs, card }
            }
        })
    })
}

pub fn neighbourhood() -> impl Strategy<Value = Neighbourhood> {
    prop::collection::vec((0..PREDS.len(), 0usize..3, prop::bool::weighted(0.25)), 0..=8).prop_map(|arcs| {
        let mut out = BTreeSet::new();
        let mut inn = BTreeSet::new();
        for (p, v, inverse) in arcs {
            if inverse {
                let subject = if v == 2 { ex("c") } else { value_term(v) };
                inn.insert(t(subject, PREDS[p], focus()));
            } else {
                out.insert(t(focus(), PREDS[p], value_term(v)));
            }
        }
        Neighbourhood { out: out.into_iter().collect(), inn: inn.into_iter().collect() }
    })
}

pub fn shape() -> impl Strategy<Value = Shape> {
    (prop::option::of(triple_expr()), prop::bool::weighted(0.3), prop::collection::btree_set(0..PREDS.len(), 0..=2))
        .prop_map(|(expr, closed, extra)| Shape {
            closed,
            extra: extra.into_iter().map(|i| Iri::new(PREDS[i])).collect(),
            expr,
            includes: Vec::new(),
        })
}

pub fn node_value(v: &RdfTerm, e: &ShapeExpr) -> bool {
    match e {
        ShapeExpr::NodeConstraint(nc) => nc.accepts(v),
        _ => false,
    }
}

// ---- greatest fixed point of a positive recursive schema ----

/// Verdicts of every (node, label) pair by fixed-point iteration from
/// "everything conforms", using the brute-force matcher for shapes.
pub fn greatest_fixpoint(g: &Graph, schema: &Schema, nodes: &[RdfTerm]) -> HashMap<(RdfTerm, ShapeLabel), bool> {
    let mut v: HashMap<(RdfTerm, ShapeLabel), bool> =
        nodes.iter().flat_map(|n| schema.shapes.keys().map(move |l| ((n.clone(), l.clone()), true))).collect();
    loop {
        let mut changed = false;
        for n in nodes {
            for (l, e) in &schema.shapes {
                let now = fix_eval(g, &v, n, e);
                let slot = v.get_mut(&(n.clone(), l.clone())).unwrap();
                if *slot != now {
                    *slot = now;
                    changed = true;
                }
            }
        }
        if !changed {
            return v;
        }
    }
}

fn fix_eval(g: &Graph, v: &HashMap<(RdfTerm, ShapeLabel), bool>, n: &RdfTerm, e: &ShapeExpr) -> bool {
    match e {
        ShapeExpr::NodeConstraint(nc) => nc.accepts(n),
        ShapeExpr::Ref(l) => v.get(&(n.clone(), l.clone())).copied().unwrap_or(false),
        ShapeExpr::And(es) => es.iter().all(|e| fix_eval(g, v, n, e)),
        ShapeExpr::Or(es) => es.iter().any(|e| fix_eval(g, v, n, e)),
        ShapeExpr::Not(e) => !fix_eval(g, v, n, e),
        ShapeExpr::Shape(s) => {
            let neigh = Neighbourhood::of(g, n, s);
            brute_force_match(&neigh, s, &mut |x, e| fix_eval(g, v, x, e)).unwrap()
        }
    }
}

pub const NODES: [&str; 4] = ["n0", "n1", "n2", "n3"];

/// Small graphs over four nodes and two predicates.
pub fn small_graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..=8)
        .prop_map(|ts| Graph::new(ts.into_iter().map(|(s, p, o)| t(ex(NODES[s]), PREDS[p], ex(NODES[o]))), Vec::new()))
}

/// Positive schemas over labels S0 and S1 whose values may refer back.
pub fn recursive_schema() -> impl Strategy<Value = Schema> {
    let value = prop_oneof![
        Just(ShapeExpr::Ref(label("S0"))),
        Just(ShapeExpr::Ref(label("S1"))),
        Just(ShapeExpr::NodeConstraint(NodeConstraint::wildcard())),
        Just(ShapeExpr::NodeConstraint(NodeConstraint::value_set([ex("n0"), ex("n1")]))),
    ];
    let tc = (0usize..2, value, card()).prop_map(|(p, v, c)| TripleExpr::tc(PREDS[p], v, c));
    let expr =
        prop::collection::vec(tc, 1..=3).prop_map(
            |mut v| {
                if v.len() == 1 {
                    v.pop().unwrap()
                } else {
                    TripleExpr::each_of(v)
                }
            },
        );
    let shape = (expr, prop::bool::weighted(0.2))
        .prop_map(|(e, closed)| {
            ShapeExpr::Shape(Shape { closed, extra: Default::default(), expr: Some(e), includes: Vec::new() })
        })
        .boxed();
    let top = prop_oneof![
        3 => shape.clone(),
        1 => (shape.clone(), shape.clone()).prop_map(|(a, b)| ShapeExpr::Or(vec![a, b])),
        1 => (shape.clone(), Just(ShapeExpr::Ref(label("S1")))).prop_map(|(a, b)| ShapeExpr::And(vec![a, b])),
    ];
    (top.clone(), shape).prop_map(|(s0, s1)| {
        let mut schema = Schema::default();
        schema.shapes.insert(label("S0"), s0);
        schema.shapes.insert(label("S1"), s1);
        schema
    })
}

/// Validates every manifest pair under both engines and returns the pairs
/// whose verdict differs from the manifest, plus any engine disagreement.
pub fn manifest_mismatches(
    g: &shapes_core::rdf::Graph,
    manifest: &shapes_core::wigen::GenManifest,
    shex_schema: &shapes_core::shape::Schema,
    shacl_schema: &shapes_core::shacl::ShaclSchema,
) -> Vec<String> {
    use shapes_core::validate::{engines_agree, validate_shacl_pairs, validate_shape_map};
    let expected = manifest.expected();
    let pairs = manifest.pairs();
    let a = validate_shape_map(g, shex_schema, &pairs).unwrap();
    let b = validate_shacl_pairs(g, shacl_schema, &pairs, 1).unwrap();
    let mut out = Vec::new();
    for (engine, report) in [("shex", &a), ("shacl", &b)] {
        for ((node, shape, want), got) in expected.iter().zip(&report.results) {
            assert_eq!((&got.node, &got.shape), (node, shape));
            if got.status != *want {
                out.push(format!(
                    "{engine} {node}@{shape}: want {want:?} got {:?} {:?}",
                    got.status,
                    got.reason_paths()
                ));
            }
        }
    }
    for d in engines_agree(g, shex_schema, shacl_schema, &pairs).unwrap() {
        out.push(format!("disagree {d:?}"));
    }
    out
}

pub fn n(ns: &str, local: &str) -> String {
    format!("{ns}{local}")
}

pub fn dt(iri: &str) -> ShapeExpr {
    ShapeExpr::NodeConstraint(NodeConstraint::datatype(iri))
}

pub fn one_of_values(values: &[String]) -> ShapeExpr {
    ShapeExpr::NodeConstraint(NodeConstraint::value_set(values.iter().map(RdfTerm::iri)))
}

pub fn at(name: &str) -> ShapeExpr {
    ShapeExpr::Ref(label(name))
}

pub fn iri_kind() -> ShapeExpr {
    ShapeExpr::NodeConstraint(NodeConstraint::kind(NodeKind::Iri))
}

pub fn tc(p: &str, v: ShapeExpr) -> TripleExpr {
    TripleExpr::tc(p, v, Cardinality::ONE)
}

pub fn tc_card(p: &str, v: ShapeExpr, card: Cardinality) -> TripleExpr {
    TripleExpr::tc(p, v, card)
}

pub fn shape_of(expr: TripleExpr) -> ShapeExpr {
    ShapeExpr::Shape(Shape { expr: Some(expr), ..Default::default() })
}

/// The WebIndex schema written out constructor by constructor.
pub fn expected_webindex() -> Vec<(ShapeLabel, ShapeExpr)> {
    use wi::{CEX, DCT, FOAF, ORG, QB, WF};
    let ty = rdf::TYPE;
    let country =
        shape_of(TripleExpr::each_of(vec![tc(rdfs::LABEL, dt(xsd::STRING)), tc(&n(WF, "iso2"), dt(xsd::STRING))]));
    let dataset = shape_of(TripleExpr::each_of(vec![
        tc(ty, one_of_values(&[n(QB, "DataSet")])),
        tc(&n(QB, "structure"), one_of_values(&[n(WF, "DSD")])),
        tc(rdfs::LABEL, dt(xsd::STRING)),
        tc_card(&n(QB, "slice"), at("Slice"), Cardinality::STAR),
        tc(&n(DCT, "publisher"), at("Organization")),
    ]));
    let slice = shape_of(TripleExpr::each_of(vec![
        tc(ty, one_of_values(&[n(QB, "Slice")])),
        tc(&n(QB, "sliceStructure"), one_of_values(&[n(WF, "sliceByYear")])),
        tc_card(&n(QB, "observation"), at("Observation"), Cardinality::STAR),
        tc(&n(CEX, "indicator"), at("Indicator")),
    ]));
    let observation = shape_of(TripleExpr::each_of(vec![
        tc(ty, one_of_values(&[n(QB, "Observation")])),
        tc(ty, one_of_values(&[n(WF, "Observation")])),
        tc(&n(CEX, "value"), dt(xsd::FLOAT)),
        tc_card(rdfs::LABEL, dt(xsd::STRING), Cardinality::OPTIONAL),
        tc(&n(DCT, "issued"), dt(xsd::DATE_TIME)),
        tc_card(&n(DCT, "publisher"), one_of_values(&[n(WF, "WebFoundation")]), Cardinality::OPTIONAL),
        tc(&n(QB, "dataSet"), at("DataSet")),
        tc(&n(CEX, "ref-area"), at("Country")),
        tc(&n(CEX, "indicator"), at("Indicator")),
        tc(&n(CEX, "ref-year"), dt(xsd::G_YEAR)),
        TripleExpr::one_of(vec![tc(&n(CEX, "computation"), at("Computation")), tc(&n(WF, "source"), iri_kind())]),
    ]));
    let computation = shape_of(tc(ty, one_of_values(&[n(CEX, "Computation")])));
    let indicator = shape_of(TripleExpr::each_of(vec![
        tc(ty, one_of_values(&[n(WF, "PrimaryIndicator"), n(WF, "SecondaryIndicator")])),
        tc(rdfs::LABEL, dt(xsd::STRING)),
        tc(&n(WF, "provider"), at("Organization")),
    ]));
    let organization = ShapeExpr::Shape(Shape {
        closed: true,
        extra: [Iri::new(ty)].into_iter().collect(),
        expr: Some(TripleExpr::each_of(vec![
            tc(ty, one_of_values(&[n(ORG, "Organization")])),
            tc(rdfs::LABEL, dt(xsd::STRING)),
            tc(&n(FOAF, "homepage"), iri_kind()),
        ])),
        includes: Vec::new(),
    });
    [country, dataset, slice, observation, computation, indicator, organization]
        .into_iter()
        .zip(schemas::SHAPE_NAMES)
        .map(|(e, name)| (label(name), e))
        .collect()
}

pub fn shape_expr() -> impl Strategy<Value = ShapeExpr> {
    let leaf = prop_oneof![shape().prop_map(ShapeExpr::Shape), value_expr(), Just(at("Other")),];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(ShapeExpr::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(ShapeExpr::Or),
            inner.prop_map(|e| ShapeExpr::Not(Box::new(e))),
        ]
    })
}

pub fn random_schema() -> impl Strategy<Value = Schema> {
    prop::collection::vec(shape_expr(), 1..=4).prop_map(|exprs| {
        let mut s = Schema { prefixes: vec![(String::new(), wi::EX.to_string())], ..Default::default() };
        s.shapes.insert(label("Other"), shape_of(tc(&n(wi::EX, "p"), iri_kind())));
        for (i, e) in exprs.into_iter().enumerate() {
            s.shapes.insert(label(&format!("S{i}")), e);
        }
        s
    })
}

pub fn subject() -> impl Strategy<Value = RdfTerm> {
    prop_oneof![
        (0usize..5).prop_map(|i| ex(&format!("s{i}"))),
        (0usize..3).prop_map(|i| RdfTerm::bnode(format!("b{i}"))),
        Just(RdfTerm::iri("http://other.example/x#y")),
    ]
}

pub fn object() -> impl Strategy<Value = RdfTerm> {
    prop_oneof![
        subject(),
        "[a-zA-Z0-9 \"\\\\\n\té]{0,8}".prop_map(RdfTerm::string),
        ("[a-z]{1,6}", prop_oneof![Just("en"), Just("es"), Just("en-gb")])
            .prop_map(|(s, l)| RdfTerm::Literal(Literal::lang(s, l))),
        (-1000i64..1000).prop_map(|n| RdfTerm::typed(n.to_string(), xsd::INTEGER)),
        (2000u32..2016).prop_map(|y| RdfTerm::typed(y.to_string(), xsd::G_YEAR)),
        Just(RdfTerm::typed("true", xsd::BOOLEAN)),
    ]
}

pub fn random_graph() -> impl Strategy<Value = Graph> {
    let preds = prop_oneof![
        Just(format!("{}p", wi::EX)),
        Just(format!("{}q", wi::EX)),
        Just(shapes_core::rdf::vocab::rdf::TYPE.to_string()),
        Just(format!("{}iso2", wi::WF)),
    ];
    prop::collection::vec((subject(), preds, object()), 0..20)
        .prop_map(|ts| Graph::new(ts.into_iter().map(|(s, p, o)| t(s, &p, o)), standard_prefixes()))
}

/// Counts up to `max` with up to two invalid nodes per shape, clamped so
/// the generator's preconditions hold.
pub fn gen_config(max: usize) -> impl Strategy<Value = GenConfig> {
    (prop::collection::vec((1..=max, 0usize..=2), 7), any::<u64>(), any::<bool>()).prop_map(|(counts, seed, typed)| {
        let mut cfg = GenConfig { seed, typed, ..GenConfig::default() };
        for (kind, (n, k)) in ShapeKind::ALL.into_iter().zip(counts) {
            cfg.set_count(kind, n);
            cfg.invalid.insert(kind, k.min(n - 1));
        }
        cfg
    })
}
