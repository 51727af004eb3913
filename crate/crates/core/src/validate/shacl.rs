use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::recursion::{Recursion, SETTLED};
use super::report::{NodeShapeResult, Reason, Status, ValidationReport};
use crate::rdf::{Compactor, Graph, Iri, RdfTerm};
use crate::shacl::{scope_targets, NodeConstraint, PropertyConstraint, ShaclSchema, ShaclShape};
use crate::shape::ShapeLabel;

const EXPLAIN_DEPTH: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShaclValidationError {
    #[error("unknown shape {0}")]
    UnknownShape(ShapeLabel),
}

/// Validates the focus nodes selected by the schema's own scopes.
pub fn validate_shacl(graph: &Graph, schema: &ShaclSchema) -> ValidationReport {
    let pairs = scope_targets(schema, graph);
    validate_shacl_pairs(graph, schema, &pairs, 1).expect("scoped shapes are defined")
}

/// Validates explicit (node, shape) pairs with up to `threads` workers.
pub fn validate_shacl_pairs(
    graph: &Graph,
    schema: &ShaclSchema,
    pairs: &[(RdfTerm, ShapeLabel)],
    threads: usize,
) -> Result<ValidationReport, ShaclValidationError> {
    if let Some((_, l)) = pairs.iter().find(|(_, l)| schema.get(l).is_none()) {
        return Err(ShaclValidationError::UnknownShape(l.clone()));
    }
    let start = Instant::now();
    let results: Vec<NodeShapeResult> = if threads <= 1 {
        let mut v = ShaclValidator::new(schema, graph);
        pairs.iter().map(|(n, l)| v.result(n, l)).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| {
            pairs
                .par_iter()
                .map_init(|| ShaclValidator::new(schema, graph), |v, (n, l)| v.result(n, l))
                .collect::<Result<_, _>>()
        })?
    };
    Ok(ValidationReport::new(results, start.elapsed().as_secs_f64() * 1e3))
}

pub struct ShaclValidator<'g> {
    schema: &'g ShaclSchema,
    graph: &'g Graph,
    rec: Recursion<(RdfTerm, usize)>,
}

impl<'g> ShaclValidator<'g> {
    pub fn new(schema: &'g ShaclSchema, graph: &'g Graph) -> Self {
        ShaclValidator { schema, graph, rec: Recursion::new() }
    }

    pub fn conforms(&mut self, node: &RdfTerm, label: &ShapeLabel) -> Result<bool, ShaclValidationError> {
        let idx = self.index(label)?;
        Ok(self.check(node, idx).0)
    }

    pub fn result(&mut self, node: &RdfTerm, label: &ShapeLabel) -> Result<NodeShapeResult, ShaclValidationError> {
        let idx = self.index(label)?;
        let ok = self.check(node, idx).0;
        Ok(self.build_result(node, idx, ok, EXPLAIN_DEPTH))
    }

    fn index(&self, label: &ShapeLabel) -> Result<usize, ShaclValidationError> {
        self.schema.shapes.get_index_of(label).ok_or_else(|| ShaclValidationError::UnknownShape(label.clone()))
    }

    fn check(&mut self, node: &RdfTerm, idx: usize) -> (bool, usize) {
        let key = (node.clone(), idx);
        let frame = match self.rec.enter(&key) {
            Ok(known) => return known,
            Err(frame) => frame,
        };
        let schema = self.schema;
        let (ok, dep) = self.eval_shape(node, &schema.shapes[idx]);
        self.rec.finish(key, frame, ok, dep)
    }

    fn check_label(&mut self, node: &RdfTerm, label: &ShapeLabel) -> (bool, usize) {
        match self.schema.shapes.get_index_of(label) {
            Some(idx) => self.check(node, idx),
            None => (false, SETTLED),
        }
    }

    /// Filters are evaluated without assumptions: the loader keeps them off
    /// recursion cycles.
    fn passes_filter(&mut self, node: &RdfTerm, filter: Option<&ShapeLabel>) -> bool {
        filter.is_none_or(|f| self.check_label(node, f).0)
    }

    fn eval_shape(&mut self, node: &RdfTerm, shape: &'g ShaclShape) -> (bool, usize) {
        if !self.passes_filter(node, shape.filter.as_ref()) {
            return (true, SETTLED);
        }
        let mut dep = SETTLED;
        for p in &shape.properties {
            let (ok, d) = self.eval_property(node, p);
            if !ok {
                return (false, SETTLED);
            }
            dep = dep.min(d);
        }
        for nc in &shape.node_constraints {
            let (ok, d) = self.eval_node_constraint(node, shape, nc);
            if !ok {
                return (false, SETTLED);
            }
            dep = dep.min(d);
        }
        (true, dep)
    }

    fn eval_property(&mut self, node: &RdfTerm, p: &'g PropertyConstraint) -> (bool, usize) {
        if !self.passes_filter(node, p.filter_shape.as_ref()) {
            return (true, SETTLED);
        }
        let graph = self.graph;
        let values = graph.values_for(node, &p.predicate);
        let n = values.len() as u32;
        if n < p.min_count || p.max_count.is_some_and(|m| n > m) {
            return (false, SETTLED);
        }
        if !values.iter().all(|v| facets_ok(p, v)) {
            return (false, SETTLED);
        }
        if let Some(h) = &p.has_value {
            if !values.contains(&h) {
                return (false, SETTLED);
            }
        }
        let mut dep = SETTLED;
        if let Some(vs) = &p.value_shape {
            for v in &values {
                let (ok, d) = self.check_label(v, vs);
                if !ok {
                    return (false, SETTLED);
                }
                dep = dep.min(d);
            }
        }
        if let Some(q) = &p.qualified {
            let mut count = 0u32;
            for v in &values {
                let (ok, d) = self.check_label(v, &q.shape);
                if ok {
                    count += 1;
                    dep = dep.min(d);
                }
            }
            if q.min.is_some_and(|m| count < m) || q.max.is_some_and(|m| count > m) {
                return (false, SETTLED);
            }
        }
        (true, dep)
    }

    fn eval_node_constraint(&mut self, node: &RdfTerm, shape: &ShaclShape, nc: &'g NodeConstraint) -> (bool, usize) {
        match nc {
            NodeConstraint::Or(ls) => {
                for l in ls {
                    let (ok, d) = self.check_label(node, l);
                    if ok {
                        return (true, d);
                    }
                }
                (false, SETTLED)
            }
            NodeConstraint::And(ls) => {
                let mut dep = SETTLED;
                for l in ls {
                    let (ok, d) = self.check_label(node, l);
                    if !ok {
                        return (false, SETTLED);
                    }
                    dep = dep.min(d);
                }
                (true, dep)
            }
            NodeConstraint::Not(l) => (!self.check_label(node, l).0, SETTLED),
            NodeConstraint::Closed { ignored } => (self.undeclared(node, shape, ignored).is_empty(), SETTLED),
            _ => (node_facet_ok(nc, node), SETTLED),
        }
    }

    /// Out-predicates of `node` neither declared by a property constraint nor ignored.
    fn undeclared(&self, node: &RdfTerm, shape: &ShaclShape, ignored: &BTreeSet<Iri>) -> Vec<&'g Iri> {
        let declared: BTreeSet<&Iri> = shape.properties.iter().map(|p| &p.predicate).collect();
        let mut out: Vec<&Iri> = self
            .graph
            .triples_out(node)
            .iter()
            .map(|t| &t.predicate)
            .filter(|p| !declared.contains(p) && !ignored.contains(*p))
            .collect();
        out.dedup();
        out
    }

    fn build_result(&mut self, node: &RdfTerm, idx: usize, ok: bool, depth: usize) -> NodeShapeResult {
        let schema = self.schema;
        let (label, shape) = schema.shapes.get_index(idx).expect("shape index");
        let reasons = if ok { Vec::new() } else { self.explain(node, shape, depth) };
        NodeShapeResult { node: node.clone(), shape: label.clone(), status: Status::from_bool(ok), reasons }
    }

    fn nested(&mut self, node: &RdfTerm, label: &ShapeLabel, depth: usize) -> Vec<NodeShapeResult> {
        match (depth, self.schema.shapes.get_index_of(label)) {
            (1.., Some(idx)) => vec![self.build_result(node, idx, false, depth - 1)],
            _ => Vec::new(),
        }
    }

    fn explain(&mut self, node: &RdfTerm, shape: &'g ShaclShape, depth: usize) -> Vec<Reason> {
        let schema = self.schema;
        let c = Compactor::new(&schema.prefixes);
        let name = |l: &ShapeLabel| match l {
            ShapeLabel::Iri(i) => c.iri(i),
            other => other.to_string(),
        };
        let terms = |ts: &[&RdfTerm]| ts.iter().map(|t| c.term(t)).collect::<Vec<_>>().join(" ");
        let mut reasons = Vec::new();
        for p in &shape.properties {
            if self.eval_property(node, p).0 {
                continue;
            }
            let pred = Some(c.iri(&p.predicate));
            let values = self.graph.values_for(node, &p.predicate);
            let n = values.len() as u32;
            if n < p.min_count || p.max_count.is_some_and(|m| n > m) {
                let max = p.max_count.map_or("*".to_string(), |m| m.to_string());
                reasons.push(Reason::new(
                    pred.clone(),
                    format!("[{},{max}] values", p.min_count),
                    format!("{n} values"),
                ));
            }
            for v in values.iter().filter(|v| !facets_ok(p, v)) {
                reasons.push(Reason::new(pred.clone(), facet_text(p, &c), c.term(v)));
            }
            if let Some(h) = &p.has_value {
                if !values.contains(&h) {
                    reasons.push(Reason::new(
                        pred.clone(),
                        format!("value {}", c.term(h)),
                        format!("({})", terms(&values)),
                    ));
                }
            }
            if let Some(vs) = &p.value_shape {
                for v in &values {
                    if !self.check_label(v, vs).0 {
                        let mut r = Reason::new(pred.clone(), format!("conforms to {}", name(vs)), c.term(v));
                        r.nested = self.nested(v, vs, depth);
                        reasons.push(r);
                    }
                }
            }
            if let Some(q) = &p.qualified {
                let count = values.iter().filter(|v| self.check_label(v, &q.shape).0).count();
                let bound = |b: Option<u32>| b.map_or("*".to_string(), |m| m.to_string());
                let expected = format!("[{},{}] values conforming to {}", bound(q.min), bound(q.max), name(&q.shape));
                let ok = q.min.is_none_or(|m| count as u32 >= m) && q.max.is_none_or(|m| count as u32 <= m);
                if !ok {
                    reasons.push(Reason::new(pred.clone(), expected, format!("{count}")));
                }
            }
        }
        for nc in &shape.node_constraints {
            if self.eval_node_constraint(node, shape, nc).0 {
                continue;
            }
            let r = match nc {
                NodeConstraint::Or(ls) => {
                    let names: Vec<String> = ls.iter().map(&name).collect();
                    let mut r = Reason::new(None, format!("one of {}", names.join(", ")), "none holds");
                    for l in ls {
                        r.nested.extend(self.nested(node, l, depth));
                    }
                    r
                }
                NodeConstraint::And(ls) => {
                    let names: Vec<String> = ls.iter().map(&name).collect();
                    let mut r = Reason::new(None, format!("all of {}", names.join(", ")), "some fail");
                    for l in ls {
                        if !self.check_label(node, l).0 {
                            r.nested.extend(self.nested(node, l, depth));
                        }
                    }
                    r
                }
                NodeConstraint::Not(l) => Reason::new(None, format!("not {}", name(l)), "conforms"),
                NodeConstraint::Closed { ignored } => {
                    let extra: Vec<String> = self.undeclared(node, shape, ignored).iter().map(|p| c.iri(p)).collect();
                    Reason::new(None, "only declared or ignored predicates", format!("({})", extra.join(" ")))
                }
                NodeConstraint::In(vs) => {
                    let items: Vec<&RdfTerm> = vs.iter().collect();
                    Reason::new(None, format!("in ({})", terms(&items)), c.term(node))
                }
                NodeConstraint::Datatype(dt) => Reason::new(None, format!("datatype {}", c.iri(dt)), c.term(node)),
                NodeConstraint::NodeKind(k) => Reason::new(None, format!("node kind {}", k.keyword()), c.term(node)),
                NodeConstraint::HasValue(v) => Reason::new(None, format!("value {}", c.term(v)), c.term(node)),
            };
            reasons.push(r);
        }
        if reasons.is_empty() {
            reasons.push(Reason::new(None, "conformance", "nonconformant"));
        }
        reasons
    }
}

fn facets_ok(p: &PropertyConstraint, v: &RdfTerm) -> bool {
    if let Some(dt) = &p.datatype {
        if v.as_literal().is_none_or(|l| l.datatype() != dt) {
            return false;
        }
    }
    if p.node_kind.is_some_and(|k| !k.accepts(v)) {
        return false;
    }
    if p.in_set.as_ref().is_some_and(|set| !set.contains(v)) {
        return false;
    }
    true
}

fn facet_text(p: &PropertyConstraint, c: &Compactor) -> String {
    let mut parts = Vec::new();
    if let Some(dt) = &p.datatype {
        parts.push(format!("datatype {}", c.iri(dt)));
    }
    if let Some(k) = p.node_kind {
        parts.push(format!("node kind {}", k.keyword()));
    }
    if let Some(set) = &p.in_set {
        let items: Vec<String> = set.iter().map(|t| c.term(t)).collect();
        parts.push(format!("in ({})", items.join(" ")));
    }
    parts.join(", ")
}

fn node_facet_ok(nc: &NodeConstraint, node: &RdfTerm) -> bool {
    match nc {
        NodeConstraint::In(vs) => vs.contains(node),
        NodeConstraint::Datatype(dt) => node.as_literal().is_some_and(|l| l.datatype() == dt),
        NodeConstraint::NodeKind(k) => k.accepts(node),
        NodeConstraint::HasValue(v) => v == node,
        _ => true,
    }
}
