use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::matcher::{self, Problem};
use super::recursion::{Recursion, SETTLED};
use super::report::{NodeShapeResult, Reason, Status, ValidationReport};
use crate::rdf::{Compactor, Graph, RdfTerm, Triple};
use crate::shape::{resolve_inclusions, well_formed, Diagnostic, InclusionError, Schema, Shape, ShapeExpr, ShapeLabel};
use crate::shexc::{card_text, shape_expr_to_shexc};

/// How many levels of referenced shapes an explanation descends into.
const EXPLAIN_DEPTH: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShexValidationError {
    #[error("unknown shape {0}")]
    UnknownShape(ShapeLabel),
    #[error("schema is not well formed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<Diagnostic>),
    #[error(transparent)]
    Inclusion(#[from] InclusionError),
}

/// A checked schema with inclusions resolved, ready to validate graphs.
#[derive(Debug, Clone)]
pub struct ShexEngine {
    schema: Schema,
}

impl ShexEngine {
    pub fn new(schema: &Schema) -> Result<Self, ShexValidationError> {
        let diags = well_formed(schema);
        if !diags.is_empty() {
            return Err(ShexValidationError::IllFormed(diags));
        }
        Ok(ShexEngine { schema: resolve_inclusions(schema)? })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn validator<'g>(&'g self, graph: &'g Graph) -> ShexValidator<'g> {
        ShexValidator { schema: &self.schema, graph, rec: Recursion::new() }
    }

    fn check_labels(&self, pairs: &[(RdfTerm, ShapeLabel)]) -> Result<(), ShexValidationError> {
        match pairs.iter().find(|(_, l)| !self.schema.shapes.contains_key(l)) {
            Some((_, l)) => Err(ShexValidationError::UnknownShape(l.clone())),
            None => Ok(()),
        }
    }

    /// Validates every pair in order with one shared memo.
    pub fn validate_shape_map(
        &self,
        graph: &Graph,
        pairs: &[(RdfTerm, ShapeLabel)],
    ) -> Result<ValidationReport, ShexValidationError> {
        self.check_labels(pairs)?;
        let start = Instant::now();
        let mut v = self.validator(graph);
        let results = pairs.iter().map(|(n, l)| v.result(n, l)).collect::<Result<Vec<_>, _>>()?;
        Ok(ValidationReport::new(results, start.elapsed().as_secs_f64() * 1e3))
    }

    /// Like [`ShexEngine::validate_shape_map`] with up to `threads` workers,
    /// each with its own memo. Results keep the input order.
    pub fn validate_shape_map_parallel(
        &self,
        graph: &Graph,
        pairs: &[(RdfTerm, ShapeLabel)],
        threads: usize,
    ) -> Result<ValidationReport, ShexValidationError> {
        if threads <= 1 {
            return self.validate_shape_map(graph, pairs);
        }
        self.check_labels(pairs)?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        let start = Instant::now();
        let results = pool.install(|| {
            pairs
                .par_iter()
                .map_init(|| self.validator(graph), |v, (n, l)| v.result(n, l))
                .collect::<Result<Vec<_>, _>>()
        })?;
        Ok(ValidationReport::new(results, start.elapsed().as_secs_f64() * 1e3))
    }
}

/// Validates `pairs` against `schema`; the schema is checked first.
pub fn validate_shape_map(
    graph: &Graph,
    schema: &Schema,
    pairs: &[(RdfTerm, ShapeLabel)],
) -> Result<ValidationReport, ShexValidationError> {
    ShexEngine::new(schema)?.validate_shape_map(graph, pairs)
}

/// Per-run validation state over one graph: settled verdicts and the
/// assumptions of the current recursion.
pub struct ShexValidator<'g> {
    schema: &'g Schema,
    graph: &'g Graph,
    rec: Recursion<(RdfTerm, usize)>,
}

impl<'g> ShexValidator<'g> {
    pub fn conforms(&mut self, node: &RdfTerm, label: &ShapeLabel) -> Result<bool, ShexValidationError> {
        let idx = self.index(label)?;
        Ok(self.check(node, idx).0)
    }

    /// The verdict with reasons when the node does not conform.
    pub fn result(&mut self, node: &RdfTerm, label: &ShapeLabel) -> Result<NodeShapeResult, ShexValidationError> {
        let idx = self.index(label)?;
        let ok = self.check(node, idx).0;
        Ok(self.build_result(node, idx, ok, EXPLAIN_DEPTH))
    }

    fn index(&self, label: &ShapeLabel) -> Result<usize, ShexValidationError> {
        self.schema.shapes.get_index_of(label).ok_or_else(|| ShexValidationError::UnknownShape(label.clone()))
    }

    fn check(&mut self, node: &RdfTerm, idx: usize) -> (bool, usize) {
        let key = (node.clone(), idx);
        let frame = match self.rec.enter(&key) {
            Ok(known) => return known,
            Err(frame) => frame,
        };
        let schema = self.schema;
        let (ok, dep) = self.eval(node, &schema.shapes[idx]);
        self.rec.finish(key, frame, ok, dep)
    }

    /// Verdict of `node` against `expr` and the shallowest assumption it used.
    fn eval(&mut self, node: &RdfTerm, expr: &ShapeExpr) -> (bool, usize) {
        match expr {
            ShapeExpr::NodeConstraint(nc) => (nc.accepts(node), SETTLED),
            ShapeExpr::Ref(l) => match self.schema.shapes.get_index_of(l) {
                Some(idx) => self.check(node, idx),
                None => (false, SETTLED),
            },
            ShapeExpr::And(es) => {
                let mut dep = SETTLED;
                for e in es {
                    let (ok, d) = self.eval(node, e);
                    if !ok {
                        return (false, SETTLED);
                    }
                    dep = dep.min(d);
                }
                (true, dep)
            }
            ShapeExpr::Or(es) => {
                for e in es {
                    let (ok, d) = self.eval(node, e);
                    if ok {
                        return (true, d);
                    }
                }
                (false, SETTLED)
            }
            ShapeExpr::Not(e) => (!self.eval(node, e).0, SETTLED),
            ShapeExpr::Shape(shape) => self.eval_shape(node, shape),
        }
    }

    fn neighbourhood(&self, node: &RdfTerm, shape: &Shape) -> (&'g [Triple], Vec<&'g Triple>) {
        let graph = self.graph;
        let out = graph.triples_out(node);
        let has_inverse = shape.expr.as_ref().is_some_and(|e| e.constraints().iter().any(|tc| tc.inverse));
        let inn = if has_inverse { graph.triples_in(node) } else { Vec::new() };
        (out, inn)
    }

    fn eval_shape(&mut self, node: &RdfTerm, shape: &Shape) -> (bool, usize) {
        let (out, inn) = self.neighbourhood(node, shape);
        let mut dep = SETTLED;
        let ok = matcher::matches(shape, out, &inn, &mut |v, e| {
            let (ok, d) = self.eval(v, e);
            if ok {
                dep = dep.min(d);
            }
            ok
        });
        if ok {
            (true, dep)
        } else {
            (false, SETTLED)
        }
    }

    fn verdict(&mut self, node: &RdfTerm, expr: &ShapeExpr) -> bool {
        self.eval(node, expr).0
    }

    fn build_result(&mut self, node: &RdfTerm, idx: usize, ok: bool, depth: usize) -> NodeShapeResult {
        let (label, expr) = self.schema.shapes.get_index(idx).expect("shape index");
        let reasons = if ok { Vec::new() } else { self.explain(node, expr, depth) };
        NodeShapeResult { node: node.clone(), shape: label.clone(), status: Status::from_bool(ok), reasons }
    }

    fn text(&self, e: &ShapeExpr) -> String {
        shape_expr_to_shexc(e, &self.schema.prefixes)
    }

    /// Reasons why `node` fails `expr`; only called on settled failures.
    fn explain(&mut self, node: &RdfTerm, expr: &ShapeExpr, depth: usize) -> Vec<Reason> {
        let c = Compactor::new(&self.schema.prefixes);
        match expr {
            ShapeExpr::NodeConstraint(_) => vec![Reason::new(None, self.text(expr), c.term(node))],
            ShapeExpr::Ref(l) => {
                let Some(idx) = self.schema.shapes.get_index_of(l) else {
                    return vec![Reason::new(None, format!("shape {l}"), "undefined shape")];
                };
                let mut r = Reason::new(None, format!("conforms to {}", self.text(expr)), "nonconformant");
                if depth > 0 {
                    r.nested.push(self.build_result(node, idx, false, depth - 1));
                }
                vec![r]
            }
            ShapeExpr::And(es) => {
                let mut out = Vec::new();
                for e in es {
                    if !self.verdict(node, e) {
                        out.extend(self.explain(node, e, depth));
                    }
                }
                out
            }
            ShapeExpr::Or(_) => vec![Reason::new(None, self.text(expr), "no alternative holds")],
            ShapeExpr::Not(_) => vec![Reason::new(None, self.text(expr), "negated expression holds")],
            ShapeExpr::Shape(shape) => self.explain_shape(node, shape, depth),
        }
    }

    fn explain_shape(&mut self, node: &RdfTerm, shape: &Shape, depth: usize) -> Vec<Reason> {
        let schema = self.schema;
        let c = Compactor::new(&schema.prefixes);
        let (out, inn) = self.neighbourhood(node, shape);
        let diag = matcher::diagnose(shape, out, &inn, &mut |v, e| self.verdict(v, e));
        let pred = |t: &Triple, inverse: bool| {
            let p = c.iri(&t.predicate);
            Some(if inverse { format!("^{p}") } else { p })
        };
        let far = |t: &Triple, inverse: bool| if inverse { t.subject.clone() } else { t.object.clone() };
        let mut reasons = Vec::new();
        for p in diag.problems {
            let r = match p {
                Problem::Negated { tc, triple } => Reason::new(
                    pred(triple, diag.tcs[tc].inverse),
                    format!("no value matching {}", self.text(&diag.tcs[tc].value)),
                    c.term(&far(triple, diag.tcs[tc].inverse)),
                ),
                Problem::Unmatched { triple, inverse, closed } => {
                    let expected =
                        if closed { "no triple with this predicate" } else { "every value matched by a constraint" };
                    Reason::new(pred(triple, inverse), expected, c.term(&far(triple, inverse)))
                }
                Problem::Value { tc, triple, inverse } => {
                    let value = &*diag.tcs[tc].value;
                    let other = far(triple, inverse);
                    let mut r = Reason::new(pred(triple, inverse), self.text(value), c.term(&other));
                    if depth > 0 {
                        if let ShapeExpr::Ref(l) = value {
                            if let Some(idx) = schema.shapes.get_index_of(l) {
                                r.nested.push(self.build_result(&other, idx, false, depth - 1));
                            }
                        }
                    }
                    r
                }
                Problem::Count { tc, forced, possible } => {
                    let t = diag.tcs[tc];
                    let p = c.iri(&t.predicate);
                    let found = if forced > 0 && t.card.max.is_some_and(|m| u64::from(m) < forced) {
                        format!("{forced} values")
                    } else {
                        format!("{possible} matching values")
                    };
                    let card = match card_text(t.card) {
                        s if s.is_empty() => "{1}".to_string(),
                        s => s,
                    };
                    Reason::new(
                        Some(if t.inverse { format!("^{p}") } else { p }),
                        format!("{card} values matching {}", self.text(&t.value)),
                        found,
                    )
                }
                Problem::Exclusive { tcs } => {
                    let preds: Vec<String> = tcs.iter().map(|&i| c.iri(&diag.tcs[i].predicate)).collect();
                    Reason::new(
                        Some(preds[0].clone()),
                        format!("only one of {}", preds.join(" | ")),
                        format!("values for {}", preds.join(" and ")),
                    )
                }
                Problem::Structure => {
                    Reason::new(None, "triples arranged as the triple expression requires", "no valid assignment")
                }
            };
            reasons.push(r);
        }
        reasons
    }
}
