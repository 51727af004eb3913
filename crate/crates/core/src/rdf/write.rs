use std::fmt::Write as _;

use super::term::{escape_string, Iri, RdfTerm};
use super::vocab::{rdf, xsd};
use super::Graph;

fn is_safe_local(local: &str) -> bool {
    !local.is_empty()
        && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !local.starts_with('-')
}

/// Compacts IRIs against a prefix table, preferring the longest namespace.
pub struct Compactor<'a> {
    prefixes: &'a [(String, String)],
}

impl<'a> Compactor<'a> {
    pub fn new(prefixes: &'a [(String, String)]) -> Self {
        Compactor { prefixes }
    }

    pub fn iri(&self, iri: &Iri) -> String {
        let value = iri.as_str();
        let best = self
            .prefixes
            .iter()
            .filter(|(_, ns)| value.starts_with(ns.as_str()) && is_safe_local(&value[ns.len()..]))
            .max_by_key(|(_, ns)| ns.len());
        match best {
            Some((prefix, ns)) => format!("{prefix}:{}", &value[ns.len()..]),
            None => format!("<{value}>"),
        }
    }

    pub fn term(&self, term: &RdfTerm) -> String {
        match term {
            RdfTerm::Iri(iri) => self.iri(iri),
            RdfTerm::BNode(label) => format!("_:{label}"),
            RdfTerm::Literal(lit) => {
                let mut out = format!("\"{}\"", escape_string(lit.lexical()));
                if let Some(tag) = lit.lang_tag() {
                    out.push('@');
                    out.push_str(tag);
                } else if lit.datatype().as_str() != xsd::STRING {
                    out.push_str("^^");
                    out.push_str(&self.iri(lit.datatype()));
                }
                out
            }
        }
    }
}

/// Writes `g` as Turtle: one group per subject, predicates in lexical order.
/// Literals are always written in quoted form so the text re-reads to the
/// identical terms.
pub fn serialize_turtle(g: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in g.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    if !g.prefixes().is_empty() && !g.is_empty() {
        out.push('\n');
    }
    let c = Compactor::new(g.prefixes());
    let triples = g.triples();
    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].subject;
        out.push_str(&c.term(subject));
        let mut first_pred = true;
        while i < triples.len() && &triples[i].subject == subject {
            let pred = &triples[i].predicate;
            if !first_pred {
                out.push_str(" ;\n   ");
            }
            first_pred = false;
            out.push(' ');
            if pred.as_str() == rdf::TYPE {
                out.push('a');
            } else {
                out.push_str(&c.iri(pred));
            }
            let mut first_obj = true;
            while i < triples.len() && &triples[i].subject == subject && &triples[i].predicate == pred {
                out.push_str(if first_obj { " " } else { ", " });
                first_obj = false;
                out.push_str(&c.term(&triples[i].object));
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}
