use std::collections::HashMap;

use thiserror::Error;

use super::{Schema, Shape, ShapeExpr, ShapeLabel, TripleExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InclusionError {
    #[error("inclusion cycle: {}", .0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" & "))]
    Cycle(Vec<ShapeLabel>),
    #[error("{0} is included but is not a shape")]
    NotAShape(ShapeLabel),
    #[error("{0} is included but not defined")]
    Undefined(ShapeLabel),
}

/// Replaces every inclusion by splicing the included shape's triple
/// expression into an `EachOf` with the includer's own expression. The
/// includer's CLOSED and EXTRA settings are kept.
pub fn resolve_inclusions(s: &Schema) -> Result<Schema, InclusionError> {
    let mut resolver = Resolver { schema: s, done: HashMap::new(), stack: Vec::new() };
    let mut shapes = s.shapes.clone();
    for (label, expr) in shapes.iter_mut() {
        if let ShapeExpr::Shape(_) = expr {
            if let Some(resolved) = resolver.label_expr(label)? {
                *expr = ShapeExpr::Shape(resolved);
                continue;
            }
        }
        resolver.rewrite(expr)?;
    }
    Ok(Schema { shapes, prefixes: s.prefixes.clone() })
}

struct Resolver<'a> {
    schema: &'a Schema,
    done: HashMap<ShapeLabel, Shape>,
    stack: Vec<ShapeLabel>,
}

impl Resolver<'_> {
    /// The resolved shape for a top-level label, if the label names a shape.
    fn label_expr(&mut self, label: &ShapeLabel) -> Result<Option<Shape>, InclusionError> {
        if let Some(done) = self.done.get(label) {
            return Ok(Some(done.clone()));
        }
        let Some(ShapeExpr::Shape(shape)) = self.schema.shapes.get(label) else {
            return Ok(None);
        };
        if let Some(pos) = self.stack.iter().position(|l| l == label) {
            let mut cycle = self.stack[pos..].to_vec();
            cycle.push(label.clone());
            return Err(InclusionError::Cycle(cycle));
        }
        self.stack.push(label.clone());
        let resolved = self.resolve_shape(shape);
        self.stack.pop();
        let resolved = resolved?;
        self.done.insert(label.clone(), resolved.clone());
        Ok(Some(resolved))
    }

    fn resolve_shape(&mut self, shape: &Shape) -> Result<Shape, InclusionError> {
        let mut parts = Vec::new();
        for inc in &shape.includes {
            if !self.schema.shapes.contains_key(inc) {
                return Err(InclusionError::Undefined(inc.clone()));
            }
            let included = self.label_expr(inc)?.ok_or_else(|| InclusionError::NotAShape(inc.clone()))?;
            if let Some(e) = included.expr {
                parts.push(e);
            }
        }
        let mut own = shape.expr.clone();
        if let Some(e) = own.as_mut() {
            self.rewrite_triple_expr(e)?;
        }
        let expr = if parts.is_empty() {
            own
        } else {
            parts.extend(own);
            Some(if parts.len() == 1 { parts.pop().unwrap() } else { TripleExpr::each_of(parts) })
        };
        Ok(Shape { closed: shape.closed, extra: shape.extra.clone(), expr, includes: Vec::new() })
    }

    fn rewrite(&mut self, expr: &mut ShapeExpr) -> Result<(), InclusionError> {
        match expr {
            ShapeExpr::NodeConstraint(_) | ShapeExpr::Ref(_) => Ok(()),
            ShapeExpr::Shape(shape) => {
                *shape = self.resolve_shape(shape)?;
                Ok(())
            }
            ShapeExpr::And(es) | ShapeExpr::Or(es) => es.iter_mut().try_for_each(|e| self.rewrite(e)),
            ShapeExpr::Not(e) => self.rewrite(e),
        }
    }

    fn rewrite_triple_expr(&mut self, te: &mut TripleExpr) -> Result<(), InclusionError> {
        match te {
            TripleExpr::Constraint(tc) => self.rewrite(&mut tc.value),
            TripleExpr::EachOf { exprs, .. } | TripleExpr::OneOf { exprs, .. } => {
                exprs.iter_mut().try_for_each(|e| self.rewrite_triple_expr(e))
            }
        }
    }
}
