use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{Cardinality, Schema, ShapeExpr, ShapeLabel, TripleExpr};
use crate::rdf::Iri;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    UndefinedReference(ShapeLabel),
    UndefinedInclude(ShapeLabel),
    InvalidCardinality {
        predicate: Option<Iri>,
        card: Cardinality,
    },
    EmptyNodeConstraint,
    EmptyGroup,
    /// A negation whose operand can reach back to the enclosing label.
    NegationCycle(Vec<ShapeLabel>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub label: ShapeLabel,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        match &self.kind {
            DiagnosticKind::UndefinedReference(t) => write!(f, "reference to undefined shape {t}"),
            DiagnosticKind::UndefinedInclude(t) => write!(f, "inclusion of undefined shape {t}"),
            DiagnosticKind::InvalidCardinality { predicate, card } => match predicate {
                Some(p) => write!(f, "invalid cardinality {card} on {p}"),
                None => write!(f, "invalid group cardinality {card}"),
            },
            DiagnosticKind::EmptyNodeConstraint => write!(f, "node constraint without facets"),
            DiagnosticKind::EmptyGroup => write!(f, "empty EachOf/OneOf group"),
            DiagnosticKind::NegationCycle(cycle) => {
                let names: Vec<String> = cycle.iter().map(|l| l.to_string()).collect();
                write!(f, "negation on a recursion cycle: {}", names.join(" -> "))
            }
        }
    }
}

/// Checks references, cardinalities and negation stratification.
/// An empty result means the schema is well formed.
pub fn well_formed(s: &Schema) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (label, expr) in &s.shapes {
        check_expr(s, label, expr, &mut diags);
    }
    check_negation(s, &mut diags);
    diags
}

fn check_expr(s: &Schema, label: &ShapeLabel, expr: &ShapeExpr, diags: &mut Vec<Diagnostic>) {
    let mut push = |kind| diags.push(Diagnostic { label: label.clone(), kind });
    match expr {
        ShapeExpr::NodeConstraint(nc) => {
            if !nc.has_facet() {
                push(DiagnosticKind::EmptyNodeConstraint);
            }
        }
        ShapeExpr::Ref(target) => {
            if !s.shapes.contains_key(target) {
                push(DiagnosticKind::UndefinedReference(target.clone()));
            }
        }
        ShapeExpr::Shape(shape) => {
            for inc in &shape.includes {
                if !s.shapes.contains_key(inc) {
                    push(DiagnosticKind::UndefinedInclude(inc.clone()));
                }
            }
            if let Some(te) = &shape.expr {
                check_triple_expr(s, label, te, diags);
            }
        }
        ShapeExpr::And(es) | ShapeExpr::Or(es) => {
            if es.is_empty() {
                push(DiagnosticKind::EmptyGroup);
            }
            for e in es {
                check_expr(s, label, e, diags);
            }
        }
        ShapeExpr::Not(e) => check_expr(s, label, e, diags),
    }
}

fn check_triple_expr(s: &Schema, label: &ShapeLabel, te: &TripleExpr, diags: &mut Vec<Diagnostic>) {
    match te {
        TripleExpr::Constraint(tc) => {
            if !tc.card.is_valid() {
                diags.push(Diagnostic {
                    label: label.clone(),
                    kind: DiagnosticKind::InvalidCardinality { predicate: Some(tc.predicate.clone()), card: tc.card },
                });
            }
            check_expr(s, label, &tc.value, diags);
        }
        TripleExpr::EachOf { exprs, card } | TripleExpr::OneOf { exprs, card } => {
            if exprs.is_empty() {
                diags.push(Diagnostic { label: label.clone(), kind: DiagnosticKind::EmptyGroup });
            }
            if !card.is_valid() {
                diags.push(Diagnostic {
                    label: label.clone(),
                    kind: DiagnosticKind::InvalidCardinality { predicate: None, card: *card },
                });
            }
            for e in exprs {
                check_triple_expr(s, label, e, diags);
            }
        }
    }
}

/// Dependency edges between labels: (target, reached through a negation).
pub(crate) fn dependency_edges(s: &Schema) -> HashMap<&ShapeLabel, Vec<(ShapeLabel, bool)>> {
    s.shapes
        .iter()
        .map(|(label, expr)| {
            let mut edges = Vec::new();
            expr.visit_refs(false, &mut |target, negated| edges.push((target.clone(), negated)));
            (label, edges)
        })
        .collect()
}

fn check_negation(s: &Schema, diags: &mut Vec<Diagnostic>) {
    let edges = dependency_edges(s);
    for (label, _) in &s.shapes {
        for (target, negated) in &edges[label] {
            if !negated {
                continue;
            }
            if let Some(path) = path_between(&edges, target, label) {
                let mut cycle = vec![label.clone()];
                cycle.extend(path);
                let kind = DiagnosticKind::NegationCycle(cycle);
                if !diags.iter().any(|d| d.label == *label && d.kind == kind) {
                    diags.push(Diagnostic { label: label.clone(), kind });
                }
            }
        }
    }
}

/// Shortest label path `from ... to` following dependency edges.
fn path_between(
    edges: &HashMap<&ShapeLabel, Vec<(ShapeLabel, bool)>>,
    from: &ShapeLabel,
    to: &ShapeLabel,
) -> Option<Vec<ShapeLabel>> {
    let mut parent: HashMap<ShapeLabel, Option<ShapeLabel>> = HashMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    parent.insert(from.clone(), None);
    while let Some(cur) = queue.pop_front() {
        if &cur == to {
            let mut path = vec![cur.clone()];
            let mut at = cur;
            while let Some(Some(p)) = parent.get(&at) {
                path.push(p.clone());
                at = p.clone();
            }
            path.reverse();
            return Some(path);
        }
        for (next, _) in edges.get(&cur).map(|v| v.as_slice()).unwrap_or(&[]) {
            if !parent.contains_key(next) {
                parent.insert(next.clone(), Some(cur.clone()));
                queue.push_back(next.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{NodeConstraint, Shape};

    fn shape(expr: TripleExpr) -> ShapeExpr {
        ShapeExpr::Shape(Shape { expr: Some(expr), ..Default::default() })
    }

    fn schema(entries: Vec<(&str, ShapeExpr)>) -> Schema {
        Schema { shapes: entries.into_iter().map(|(l, e)| (ShapeLabel::iri(l), e)).collect(), prefixes: vec![] }
    }

    #[test]
    fn undefined_reference() {
        let s = schema(vec![(
            "http://x/S",
            shape(TripleExpr::tc("http://p", ShapeExpr::Ref(ShapeLabel::iri("http://x/T")), Cardinality::ONE)),
        )]);
        let diags = well_formed(&s);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::UndefinedReference(ShapeLabel::iri("http://x/T")));
        assert_eq!(diags[0].label, ShapeLabel::iri("http://x/S"));
    }

    #[test]
    fn invalid_cardinality() {
        let s = schema(vec![(
            "http://x/S",
            shape(TripleExpr::tc(
                "http://p",
                ShapeExpr::NodeConstraint(NodeConstraint::wildcard()),
                Cardinality::new(3, Some(2)),
            )),
        )]);
        let diags = well_formed(&s);
        assert_eq!(diags.len(), 1);
        assert!(matches!(diags[0].kind, DiagnosticKind::InvalidCardinality { .. }));
    }

    #[test]
    fn negation_through_recursion_rejected() {
        // S -> NOT @T, T -> @S
        let s = schema(vec![
            ("http://x/S", ShapeExpr::Not(Box::new(ShapeExpr::Ref(ShapeLabel::iri("http://x/T"))))),
            (
                "http://x/T",
                shape(TripleExpr::tc("http://p", ShapeExpr::Ref(ShapeLabel::iri("http://x/S")), Cardinality::STAR)),
            ),
        ]);
        let diags = well_formed(&s);
        assert_eq!(diags.len(), 1);
        match &diags[0].kind {
            DiagnosticKind::NegationCycle(cycle) => {
                assert_eq!(cycle.first(), Some(&ShapeLabel::iri("http://x/S")));
                assert_eq!(cycle.last(), Some(&ShapeLabel::iri("http://x/S")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stratified_negation_accepted() {
        let s = schema(vec![
            ("http://x/S", ShapeExpr::Not(Box::new(ShapeExpr::Ref(ShapeLabel::iri("http://x/T"))))),
            ("http://x/T", ShapeExpr::NodeConstraint(NodeConstraint::wildcard())),
        ]);
        assert!(well_formed(&s).is_empty());
    }
}
