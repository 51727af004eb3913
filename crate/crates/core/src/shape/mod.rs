//! Language-neutral representation of shape schemas.
//!
//! A [`Schema`] maps labels to [`ShapeExpr`]s. Shapes describe the triples
//! around a focus node through a [`TripleExpr`] built from triple
//! constraints, `EachOf` groups and `OneOf` choices, each with a
//! [`Cardinality`].

mod inclusion;
mod wellformed;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

use crate::rdf::{Iri, RdfTerm};

pub use inclusion::{resolve_inclusions, InclusionError};
pub use wellformed::{well_formed, Diagnostic, DiagnosticKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeLabel {
    Iri(Iri),
    BNode(String),
}

impl ShapeLabel {
    pub fn iri(value: impl AsRef<str>) -> Self {
        ShapeLabel::Iri(Iri::new(value))
    }

    /// The label as a graph term (shape IRIs double as SHACL shape nodes).
    pub fn to_term(&self) -> RdfTerm {
        match self {
            ShapeLabel::Iri(iri) => RdfTerm::Iri(iri.clone()),
            ShapeLabel::BNode(l) => RdfTerm::bnode(l),
        }
    }

    pub fn from_term(term: &RdfTerm) -> Option<Self> {
        match term {
            RdfTerm::Iri(iri) => Some(ShapeLabel::Iri(iri.clone())),
            RdfTerm::BNode(l) => Some(ShapeLabel::BNode(l.to_string())),
            RdfTerm::Literal(_) => None,
        }
    }
}

impl fmt::Display for ShapeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeLabel::Iri(iri) => write!(f, "{iri}"),
            ShapeLabel::BNode(l) => write!(f, "_:{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Iri,
    Literal,
    BNode,
}

impl NodeKind {
    pub fn accepts(self, term: &RdfTerm) -> bool {
        match self {
            NodeKind::Iri => term.is_iri(),
            NodeKind::Literal => term.is_literal(),
            NodeKind::BNode => term.is_bnode(),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            NodeKind::Iri => "IRI",
            NodeKind::Literal => "LITERAL",
            NodeKind::BNode => "BNODE",
        }
    }
}

/// Upper bound of a cardinality; `None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cardinality {
    pub min: u32,
    pub max: Option<u32>,
}

impl Cardinality {
    pub const ONE: Cardinality = Cardinality { min: 1, max: Some(1) };
    pub const OPTIONAL: Cardinality = Cardinality { min: 0, max: Some(1) };
    pub const STAR: Cardinality = Cardinality { min: 0, max: None };
    pub const PLUS: Cardinality = Cardinality { min: 1, max: None };

    pub fn new(min: u32, max: Option<u32>) -> Self {
        Cardinality { min, max }
    }

    pub fn is_valid(&self) -> bool {
        self.max.is_none_or(|max| self.min <= max)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.min as u64 && self.max.is_none_or(|max| n <= max as u64)
    }
}

impl Default for Cardinality {
    fn default() -> Self {
        Cardinality::ONE
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(max) => write!(f, "{{{},{}}}", self.min, max),
            None => write!(f, "{{{},*}}", self.min),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NodeConstraint {
    pub node_kind: Option<NodeKind>,
    pub datatype: Option<Iri>,
    pub values: Option<BTreeSet<RdfTerm>>,
    pub wildcard: bool,
}

impl NodeConstraint {
    pub fn wildcard() -> Self {
        NodeConstraint { wildcard: true, ..Default::default() }
    }

    pub fn kind(kind: NodeKind) -> Self {
        NodeConstraint { node_kind: Some(kind), ..Default::default() }
    }

    pub fn datatype(dt: impl AsRef<str>) -> Self {
        NodeConstraint { datatype: Some(Iri::new(dt)), ..Default::default() }
    }

    pub fn value_set(values: impl IntoIterator<Item = RdfTerm>) -> Self {
        NodeConstraint { values: Some(values.into_iter().collect()), ..Default::default() }
    }

    pub fn has_facet(&self) -> bool {
        self.wildcard || self.node_kind.is_some() || self.datatype.is_some() || self.values.is_some()
    }

    /// True iff `term` meets every facet that is present.
    pub fn accepts(&self, term: &RdfTerm) -> bool {
        if let Some(kind) = self.node_kind {
            if !kind.accepts(term) {
                return false;
            }
        }
        if let Some(dt) = &self.datatype {
            match term.as_literal() {
                Some(lit) if lit.datatype() == dt => {}
                _ => return false,
            }
        }
        if let Some(values) = &self.values {
            if !values.contains(term) {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Shape {
    pub closed: bool,
    pub extra: BTreeSet<Iri>,
    pub expr: Option<TripleExpr>,
    pub includes: Vec<ShapeLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeExpr {
    NodeConstraint(NodeConstraint),
    Ref(ShapeLabel),
    Shape(Shape),
    And(Vec<ShapeExpr>),
    Or(Vec<ShapeExpr>),
    Not(Box<ShapeExpr>),
}

impl ShapeExpr {
    pub fn shape_ref(label: ShapeLabel) -> Self {
        ShapeExpr::Ref(label)
    }

    /// Calls `f` on every shape label referenced below this expression,
    /// including shape references inside triple constraint values, with a flag
    /// telling whether the reference sits under a negation.
    pub fn visit_refs(&self, negated: bool, f: &mut impl FnMut(&ShapeLabel, bool)) {
        match self {
            ShapeExpr::NodeConstraint(_) => {}
            ShapeExpr::Ref(l) => f(l, negated),
            ShapeExpr::Shape(shape) => {
                for inc in &shape.includes {
                    f(inc, negated);
                }
                if let Some(expr) = &shape.expr {
                    expr.visit_refs(negated, f);
                }
            }
            ShapeExpr::And(es) | ShapeExpr::Or(es) => es.iter().for_each(|e| e.visit_refs(negated, f)),
            ShapeExpr::Not(e) => e.visit_refs(true, f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleConstraint {
    pub inverse: bool,
    /// A negated constraint forbids any matching triple; its written
    /// cardinality is kept for round-tripping but has no effect.
    pub negated: bool,
    pub predicate: Iri,
    pub value: Box<ShapeExpr>,
    pub card: Cardinality,
}

impl TripleConstraint {
    pub fn new(predicate: impl AsRef<str>, value: ShapeExpr, card: Cardinality) -> Self {
        TripleConstraint {
            inverse: false,
            negated: false,
            predicate: Iri::new(predicate),
            value: Box::new(value),
            card,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleExpr {
    Constraint(TripleConstraint),
    EachOf { exprs: Vec<TripleExpr>, card: Cardinality },
    OneOf { exprs: Vec<TripleExpr>, card: Cardinality },
}

impl TripleExpr {
    pub fn tc(predicate: impl AsRef<str>, value: ShapeExpr, card: Cardinality) -> Self {
        TripleExpr::Constraint(TripleConstraint::new(predicate, value, card))
    }

    pub fn each_of(exprs: Vec<TripleExpr>) -> Self {
        TripleExpr::EachOf { exprs, card: Cardinality::ONE }
    }

    pub fn one_of(exprs: Vec<TripleExpr>) -> Self {
        TripleExpr::OneOf { exprs, card: Cardinality::ONE }
    }

    pub fn card(&self) -> Cardinality {
        match self {
            TripleExpr::Constraint(tc) => tc.card,
            TripleExpr::EachOf { card, .. } | TripleExpr::OneOf { card, .. } => *card,
        }
    }

    /// Triple constraints in document order.
    pub fn constraints(&self) -> Vec<&TripleConstraint> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a TripleExpr, out: &mut Vec<&'a TripleConstraint>) {
            match e {
                TripleExpr::Constraint(tc) => out.push(tc),
                TripleExpr::EachOf { exprs, .. } | TripleExpr::OneOf { exprs, .. } => {
                    exprs.iter().for_each(|e| walk(e, out))
                }
            }
        }
        walk(self, &mut out);
        out
    }

    fn visit_refs(&self, negated: bool, f: &mut impl FnMut(&ShapeLabel, bool)) {
        for tc in self.constraints() {
            tc.value.visit_refs(negated || tc.negated, f);
        }
    }
}

/// Predicates of the non-negated triple constraints reachable in an
/// expression, split by direction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MentionedPredicates {
    pub forward: BTreeSet<Iri>,
    pub inverse: BTreeSet<Iri>,
}

pub fn mentioned_predicates(e: &TripleExpr) -> MentionedPredicates {
    let mut out = MentionedPredicates::default();
    for tc in e.constraints() {
        if tc.negated {
            continue;
        }
        if tc.inverse {
            out.inverse.insert(tc.predicate.clone());
        } else {
            out.forward.insert(tc.predicate.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schema {
    pub shapes: IndexMap<ShapeLabel, ShapeExpr>,
    pub prefixes: Vec<(String, String)>,
}

impl Schema {
    pub fn get(&self, label: &ShapeLabel) -> Option<&ShapeExpr> {
        self.shapes.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &ShapeLabel> {
        self.shapes.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::xsd;

    #[test]
    fn single_tc_mentions_its_predicate() {
        let e = TripleExpr::tc("http://p", ShapeExpr::NodeConstraint(NodeConstraint::wildcard()), Cardinality::ONE);
        let m = mentioned_predicates(&e);
        assert_eq!(m.forward.into_iter().collect::<Vec<_>>(), vec![Iri::new("http://p")]);
        assert!(m.inverse.is_empty());
    }

    #[test]
    fn negated_and_inverse_split() {
        let mut inv = TripleConstraint::new(
            "http://in",
            ShapeExpr::NodeConstraint(NodeConstraint::wildcard()),
            Cardinality::STAR,
        );
        inv.inverse = true;
        let mut neg = TripleConstraint::new(
            "http://neg",
            ShapeExpr::NodeConstraint(NodeConstraint::wildcard()),
            Cardinality::ONE,
        );
        neg.negated = true;
        let e = TripleExpr::each_of(vec![TripleExpr::Constraint(inv), TripleExpr::Constraint(neg)]);
        let m = mentioned_predicates(&e);
        assert!(m.forward.is_empty());
        assert!(m.inverse.contains(&Iri::new("http://in")));
    }

    #[test]
    fn node_constraint_facets() {
        let nc = NodeConstraint::datatype(xsd::STRING);
        assert!(nc.accepts(&RdfTerm::string("ES")));
        assert!(!nc.accepts(&RdfTerm::typed("1", xsd::INTEGER)));
        assert!(!nc.accepts(&RdfTerm::iri("http://x")));
        assert!(NodeConstraint::wildcard().accepts(&RdfTerm::iri("http://example.org/ITU")));
        let vs = NodeConstraint::value_set([RdfTerm::iri("http://purl.org/linked-data/cube#DataSet")]);
        assert!(vs.accepts(&RdfTerm::iri("http://purl.org/linked-data/cube#DataSet")));
        assert!(!vs.accepts(&RdfTerm::iri("http://purl.org/linked-data/cube#Slice")));
    }

    #[test]
    fn cardinality_validity() {
        assert!(Cardinality::new(2, Some(2)).is_valid());
        assert!(!Cardinality::new(3, Some(2)).is_valid());
        assert!(Cardinality::STAR.contains(1000));
        assert!(!Cardinality::PLUS.contains(0));
    }
}
