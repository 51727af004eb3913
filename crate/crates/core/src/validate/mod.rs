//! Conformance checking of graph nodes against ShEx and SHACL schemas.

mod agree;
mod matcher;
pub mod oracle;
mod recursion;
mod report;
mod shacl;
mod shape_map;
mod shex;

use crate::rdf::{Graph, RdfTerm, Triple};
use crate::shape::{mentioned_predicates, NodeConstraint, Shape, ShapeExpr};

pub use agree::{engines_agree, AgreementError, Disagreement};
pub use oracle::{brute_force_match, brute_force_match_bounded, OracleError, DEFAULT_ORACLE_BOUND};
pub use report::{NodeShapeResult, Reason, Stats, Status, ValidationReport};
pub use shacl::{validate_shacl, validate_shacl_pairs, ShaclValidationError, ShaclValidator};
pub use shape_map::{parse_shape_map, ShapeMapError};
pub use shex::{validate_shape_map, ShexEngine, ShexValidationError, ShexValidator};

/// The triples touching a focus node: `out` has it as subject, `inn` as
/// object.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Neighbourhood {
    pub out: Vec<Triple>,
    pub inn: Vec<Triple>,
}

impl Neighbourhood {
    /// The neighbourhood of `focus` seen by `shape`: incoming triples are
    /// kept only for predicates the shape mentions inversely.
    pub fn of(graph: &Graph, focus: &RdfTerm, shape: &Shape) -> Self {
        let inverse = shape.expr.as_ref().map(mentioned_predicates).unwrap_or_default().inverse;
        Neighbourhood {
            out: graph.triples_out(focus).to_vec(),
            inn: graph.triples_in(focus).into_iter().filter(|t| inverse.contains(&t.predicate)).cloned().collect(),
        }
    }
}

pub fn satisfies_node_constraint(term: &RdfTerm, nc: &NodeConstraint) -> bool {
    nc.accepts(term)
}

/// Whether the neighbourhood matches the shape's triple expression and
/// CLOSED/EXTRA rules, with `value` deciding the value expressions.
pub fn match_neighbourhood(
    neigh: &Neighbourhood,
    shape: &Shape,
    value: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
) -> bool {
    let inn: Vec<&Triple> = neigh.inn.iter().collect();
    matcher::matches(shape, &neigh.out, &inn, value)
}
