use std::fmt::Write as _;

use super::{NodeConstraint, PropertyConstraint, ShaclSchema};
use crate::rdf::{Compactor, RdfTerm};
use crate::shape::{NodeKind, ShapeLabel};

pub(super) fn dump(schema: &ShaclSchema) -> String {
    let mut out = String::new();
    for label in &schema.named {
        out.push_str(&dump_shape(schema, label));
    }
    out
}

pub(super) fn dump_shape(schema: &ShaclSchema, label: &ShapeLabel) -> String {
    let d = Dumper { schema, c: Compactor::new(&schema.prefixes) };
    let mut out = format!("{}\n", d.name(label));
    for line in d.lines(label, &mut Vec::new()) {
        let _ = writeln!(out, "  {line}");
    }
    out
}

struct Dumper<'a> {
    schema: &'a ShaclSchema,
    c: Compactor<'a>,
}

fn kind(k: NodeKind) -> &'static str {
    k.keyword()
}

fn bound(v: Option<u32>) -> String {
    v.map_or("*".into(), |v| v.to_string())
}

impl Dumper<'_> {
    fn name(&self, label: &ShapeLabel) -> String {
        match label {
            ShapeLabel::Iri(iri) => self.c.iri(iri),
            ShapeLabel::BNode(b) => format!("_:{b}"),
        }
    }

    fn terms(&self, ts: &[RdfTerm]) -> String {
        let items: Vec<String> = ts.iter().map(|t| self.c.term(t)).collect();
        format!("({})", items.join(" "))
    }

    /// Named shapes by name, blank shapes inline.
    fn inline(&self, label: &ShapeLabel, visiting: &mut Vec<ShapeLabel>) -> String {
        if matches!(label, ShapeLabel::Iri(_)) || visiting.contains(label) {
            return self.name(label);
        }
        visiting.push(label.clone());
        let lines = self.lines(label, visiting);
        visiting.pop();
        if lines.is_empty() {
            "{ }".into()
        } else {
            format!("{{ {} }}", lines.join("; "))
        }
    }

    fn lines(&self, label: &ShapeLabel, visiting: &mut Vec<ShapeLabel>) -> Vec<String> {
        let Some(shape) = self.schema.get(label) else { return vec!["undefined".into()] };
        let mut lines: Vec<String> = shape.properties.iter().map(|p| self.property(p, visiting)).collect();
        for nc in &shape.node_constraints {
            lines.push(self.node_constraint(nc, visiting));
        }
        if let Some(f) = &shape.filter {
            lines.push(format!("filter {}", self.inline(f, visiting)));
        }
        lines.sort();
        lines
    }

    fn property(&self, p: &PropertyConstraint, visiting: &mut Vec<ShapeLabel>) -> String {
        let mut s = format!("property {}", self.c.iri(&p.predicate));
        if let Some(dt) = &p.datatype {
            let _ = write!(s, " datatype {}", self.c.iri(dt));
        }
        if let Some(v) = &p.has_value {
            let _ = write!(s, " hasValue {}", self.c.term(v));
        }
        if let Some(vs) = &p.in_set {
            let _ = write!(s, " in {}", self.terms(vs));
        }
        if let Some(k) = p.node_kind {
            let _ = write!(s, " nodeKind {}", kind(k));
        }
        if let Some(v) = &p.value_shape {
            let _ = write!(s, " valueShape {}", self.inline(v, visiting));
        }
        let _ = write!(s, " count [{},{}]", p.min_count, bound(p.max_count));
        if let Some(q) = &p.qualified {
            let _ = write!(s, " qualified [{},{}] {}", bound(q.min), bound(q.max), self.inline(&q.shape, visiting));
        }
        if let Some(f) = &p.filter_shape {
            let _ = write!(s, " filter {}", self.inline(f, visiting));
        }
        s
    }

    fn node_constraint(&self, nc: &NodeConstraint, visiting: &mut Vec<ShapeLabel>) -> String {
        match nc {
            NodeConstraint::Or(ls) | NodeConstraint::And(ls) => {
                let op = if matches!(nc, NodeConstraint::Or(_)) { "or" } else { "and" };
                let items: Vec<String> = ls.iter().map(|l| self.inline(l, visiting)).collect();
                format!("{op}({})", items.join(", "))
            }
            NodeConstraint::Not(l) => format!("not {}", self.inline(l, visiting)),
            NodeConstraint::Closed { ignored } => {
                let items: Vec<String> = ignored.iter().map(|i| self.c.iri(i)).collect();
                format!("closed ignoring ({})", items.join(" "))
            }
            NodeConstraint::In(vs) => format!("in {}", self.terms(vs)),
            NodeConstraint::Datatype(dt) => format!("datatype {}", self.c.iri(dt)),
            NodeConstraint::NodeKind(k) => format!("nodeKind {}", kind(*k)),
            NodeConstraint::HasValue(v) => format!("hasValue {}", self.c.term(v)),
        }
    }
}
