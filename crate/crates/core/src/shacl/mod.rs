//! SHACL core shapes graphs: loading into a constraint tree and selecting
//! focus nodes through scopes.

mod dump;
mod load;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::rdf::vocab::rdf;
use crate::rdf::{Graph, Iri, RdfTerm};
use crate::shape::{NodeKind, ShapeLabel};

pub use load::{load_shacl, SUPPORTED_TERMS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShaclError {
    #[error("malformed RDF list at {0}")]
    MalformedList(String),
    #[error("property constraint {node} in shape {shape} has no sh:predicate")]
    MissingPredicate { shape: ShapeLabel, node: String },
    #[error("{term} on {node} must be a non-negative integer")]
    BadCount { term: String, node: String },
    #[error("{term} on {node}: {message}")]
    BadValue { term: String, node: String, message: String },
    #[error("reference to undefined shape {0}")]
    UndefinedShape(ShapeLabel),
    #[error("negation on a recursion cycle: {}", .0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" -> "))]
    NegationCycle(Vec<ShapeLabel>),
}

/// An unsupported term met while loading; the term is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShaclWarning {
    pub term: Iri,
    pub shape: ShapeLabel,
}

impl fmt::Display for ShaclWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unsupported term {} in shape {} ignored", self.term, self.shape)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifiedValueShape {
    pub shape: ShapeLabel,
    pub min: Option<u32>,
    pub max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyConstraint {
    pub predicate: Iri,
    pub datatype: Option<Iri>,
    pub has_value: Option<RdfTerm>,
    pub in_set: Option<Vec<RdfTerm>>,
    pub node_kind: Option<NodeKind>,
    pub value_shape: Option<ShapeLabel>,
    pub min_count: u32,
    pub max_count: Option<u32>,
    pub qualified: Option<QualifiedValueShape>,
    pub filter_shape: Option<ShapeLabel>,
}

impl PropertyConstraint {
    pub fn new(predicate: Iri) -> Self {
        PropertyConstraint {
            predicate,
            datatype: None,
            has_value: None,
            in_set: None,
            node_kind: None,
            value_shape: None,
            min_count: 0,
            max_count: None,
            qualified: None,
            filter_shape: None,
        }
    }
}

/// Constraints on the focus node itself rather than on one of its properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeConstraint {
    Or(Vec<ShapeLabel>),
    And(Vec<ShapeLabel>),
    Not(ShapeLabel),
    Closed { ignored: BTreeSet<Iri> },
    In(Vec<RdfTerm>),
    Datatype(Iri),
    NodeKind(NodeKind),
    HasValue(RdfTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShaclShape {
    pub properties: Vec<PropertyConstraint>,
    pub node_constraints: Vec<NodeConstraint>,
    pub filter: Option<ShapeLabel>,
}

impl ShaclShape {
    /// Labels this shape refers to, flagged when the reference sits in a
    /// non-monotone position: under `Not`, as a filter, or as a qualified
    /// shape with an upper bound.
    pub fn references(&self) -> Vec<(&ShapeLabel, bool)> {
        let mut out = Vec::new();
        for p in &self.properties {
            out.extend(p.value_shape.iter().map(|l| (l, false)));
            out.extend(p.qualified.iter().map(|q| (&q.shape, q.max.is_some())));
            out.extend(p.filter_shape.iter().map(|l| (l, true)));
        }
        out.extend(self.filter.iter().map(|l| (l, true)));
        for nc in &self.node_constraints {
            match nc {
                NodeConstraint::Or(ls) | NodeConstraint::And(ls) => out.extend(ls.iter().map(|l| (l, false))),
                NodeConstraint::Not(l) => out.push((l, true)),
                _ => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScopeMap {
    pub node_scopes: Vec<(ShapeLabel, RdfTerm)>,
    pub class_scopes: Vec<(ShapeLabel, Iri)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShaclSchema {
    /// Named and anonymous shapes; anonymous ones are keyed by blank node label.
    pub shapes: IndexMap<ShapeLabel, ShaclShape>,
    /// Shapes typed `sh:Shape` in the shapes graph.
    pub named: Vec<ShapeLabel>,
    pub scopes: ScopeMap,
    pub prefixes: Vec<(String, String)>,
}

impl ShaclSchema {
    pub fn get(&self, label: &ShapeLabel) -> Option<&ShaclShape> {
        self.shapes.get(label)
    }

    /// Canonical text rendering with anonymous shapes written inline and
    /// constraints sorted, so blank node numbering does not show.
    pub fn dump(&self) -> String {
        dump::dump(self)
    }

    pub fn dump_shape(&self, label: &ShapeLabel) -> String {
        dump::dump_shape(self, label)
    }
}

/// Focus node / shape pairs selected by the schema's scopes: node scopes
/// first, then class scopes over direct `rdf:type` triples, without
/// duplicates.
pub fn scope_targets(schema: &ShaclSchema, data: &Graph) -> Vec<(RdfTerm, ShapeLabel)> {
    let mut out: IndexSet<(RdfTerm, ShapeLabel)> = IndexSet::new();
    for (shape, node) in &schema.scopes.node_scopes {
        out.insert((node.clone(), shape.clone()));
    }
    let rdf_type = Iri::new(rdf::TYPE);
    for (shape, class) in &schema.scopes.class_scopes {
        for subject in data.subjects_for(&rdf_type, &RdfTerm::Iri(class.clone())) {
            out.insert((subject.clone(), shape.clone()));
        }
    }
    out.into_iter().collect()
}
