use std::fmt::Write as _;

use crate::rdf::vocab::rdf;
use crate::rdf::{Compactor, Iri};
use crate::shape::{Cardinality, NodeConstraint, Schema, Shape, ShapeExpr, ShapeLabel, TripleExpr};

/// Writes `s` in ShExC. Value sets use brackets; groups are always
/// parenthesised, so the output re-parses to the same structure.
pub fn serialize_shexc(s: &Schema) -> String {
    let mut out = String::new();
    for (prefix, ns) in &s.prefixes {
        let _ = writeln!(out, "prefix {prefix}: <{ns}>");
    }
    if !s.prefixes.is_empty() && !s.shapes.is_empty() {
        out.push('\n');
    }
    let w = Writer { c: Compactor::new(&s.prefixes) };
    for (label, expr) in &s.shapes {
        let _ = writeln!(out, "{} {}", w.label(label), w.shape_expr(expr, 0, true));
    }
    out
}

/// A single shape expression in ShExC on one line.
pub fn shape_expr_to_shexc(e: &ShapeExpr, prefixes: &[(String, String)]) -> String {
    Writer { c: Compactor::new(prefixes) }.shape_expr(e, 0, false)
}

struct Writer<'a> {
    c: Compactor<'a>,
}

pub(crate) fn card_text(card: Cardinality) -> String {
    match (card.min, card.max) {
        (1, Some(1)) => String::new(),
        (0, Some(1)) => "?".into(),
        (0, None) => "*".into(),
        (1, None) => "+".into(),
        (m, Some(n)) if m == n => format!("{{{m}}}"),
        (m, Some(n)) => format!("{{{m},{n}}}"),
        (m, None) => format!("{{{m},*}}"),
    }
}

impl Writer<'_> {
    fn label(&self, l: &ShapeLabel) -> String {
        match l {
            ShapeLabel::Iri(iri) => self.c.iri(iri),
            ShapeLabel::BNode(b) => format!("_:{b}"),
        }
    }

    fn predicate(&self, p: &Iri) -> String {
        if p.as_str() == rdf::TYPE {
            "a".into()
        } else {
            self.c.iri(p)
        }
    }

    /// `min_prec`: 0 = anything, 1 = operand of OR, 2 = operand of AND/NOT.
    fn shape_expr(&self, e: &ShapeExpr, min_prec: u8, top: bool) -> String {
        let (prec, text) = match e {
            ShapeExpr::Or(es) => (0, es.iter().map(|e| self.shape_expr(e, 1, false)).collect::<Vec<_>>().join(" OR ")),
            ShapeExpr::And(es) => {
                (1, es.iter().map(|e| self.shape_expr(e, 2, false)).collect::<Vec<_>>().join(" AND "))
            }
            ShapeExpr::Not(e) => (2, format!("NOT {}", self.shape_expr(e, 2, false))),
            ShapeExpr::Ref(l) => (3, format!("@{}", self.label(l))),
            ShapeExpr::NodeConstraint(nc) => (3, self.node_constraint(nc)),
            ShapeExpr::Shape(s) => (3, self.shape(s, top)),
        };
        if prec < min_prec {
            format!("({text})")
        } else {
            text
        }
    }

    fn node_constraint(&self, nc: &NodeConstraint) -> String {
        if nc.wildcard {
            return ".".into();
        }
        let mut parts = Vec::new();
        if let Some(kind) = nc.node_kind {
            parts.push(kind.keyword().to_string());
        } else if let Some(dt) = &nc.datatype {
            parts.push(self.c.iri(dt));
        }
        if let Some(values) = &nc.values {
            let members: Vec<String> = values.iter().map(|v| self.c.term(v)).collect();
            parts.push(if members.is_empty() { "[ ]".into() } else { format!("[ {} ]", members.join(" ")) });
        }
        parts.join(" ")
    }

    fn shape(&self, s: &Shape, top: bool) -> String {
        let mut out = String::new();
        for inc in &s.includes {
            let _ = write!(out, "&{} ", self.label(inc));
        }
        if s.closed {
            out.push_str("CLOSED ");
        }
        if !s.extra.is_empty() {
            out.push_str("EXTRA ");
            for p in &s.extra {
                out.push_str(&self.predicate(p));
                out.push(' ');
            }
        }
        match &s.expr {
            None => out.push_str("{ }"),
            Some(te) if top => {
                let _ = write!(out, "{{\n  {}\n}}", self.body(te, ",\n  "));
            }
            Some(te) => {
                let _ = write!(out, "{{ {} }}", self.body(te, ", "));
            }
        }
        out
    }

    fn body(&self, te: &TripleExpr, sep: &str) -> String {
        match te {
            TripleExpr::EachOf { exprs, card } if *card == Cardinality::ONE && exprs.len() > 1 => {
                exprs.iter().map(|e| self.unary(e)).collect::<Vec<_>>().join(sep)
            }
            TripleExpr::OneOf { exprs, card } if *card == Cardinality::ONE && exprs.len() > 1 => {
                exprs.iter().map(|e| self.unary(e)).collect::<Vec<_>>().join(" | ")
            }
            _ => self.unary(te),
        }
    }

    fn unary(&self, te: &TripleExpr) -> String {
        match te {
            TripleExpr::Constraint(tc) => {
                let mut out = String::new();
                if tc.negated {
                    out.push('!');
                }
                if tc.inverse {
                    out.push('^');
                }
                let _ = write!(
                    out,
                    "{} {}{}",
                    self.predicate(&tc.predicate),
                    self.shape_expr(&tc.value, 0, false),
                    card_text(tc.card)
                );
                out
            }
            TripleExpr::EachOf { exprs, card } => {
                let inner: Vec<String> = exprs.iter().map(|e| self.unary(e)).collect();
                format!("( {} ){}", inner.join(", "), card_text(*card))
            }
            TripleExpr::OneOf { exprs, card } => {
                let inner: Vec<String> = exprs.iter().map(|e| self.unary(e)).collect();
                format!("( {} ){}", inner.join(" | "), card_text(*card))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shexc::parse_shexc;

    #[test]
    fn empty_schema_prints_prefixes_only() {
        let s = Schema { shapes: Default::default(), prefixes: vec![("ex".into(), "http://e/".into())] };
        assert_eq!(serialize_shexc(&s), "prefix ex: <http://e/>\n");
    }

    #[test]
    fn round_trip_mixed_constructs() {
        let text = "prefix : <http://example.org/>\n\
                    :S & :T CLOSED EXTRA a { a [ :X ], ( :p IRI | :q @:T )*, !^:r ., :s { :t LITERAL }? }\n\
                    :T NOT (@:S OR @:U) AND .\n:U (:a :b)";
        let s = parse_shexc(text).unwrap();
        let printed = serialize_shexc(&s);
        assert_eq!(parse_shexc(&printed).unwrap(), s, "{printed}");
    }
}
