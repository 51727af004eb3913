use std::fmt;

use serde_json::json;

use crate::rdf::{Compactor, RdfTerm};
use crate::shape::ShapeLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Conformant,
    Nonconformant,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Conformant
        } else {
            Status::Nonconformant
        }
    }

    pub fn is_conformant(self) -> bool {
        self == Status::Conformant
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Conformant => "conformant",
            Status::Nonconformant => "nonconformant",
        })
    }
}

/// One violation: what was expected at `predicate` (if the violation is
/// about a property) and what was found, with the failing results of any
/// referenced shapes underneath.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reason {
    pub predicate: Option<String>,
    pub expected: String,
    pub found: String,
    pub nested: Vec<NodeShapeResult>,
}

impl Reason {
    pub fn new(predicate: Option<String>, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Reason { predicate, expected: expected.into(), found: found.into(), nested: Vec::new() }
    }

    fn flatten(&self, prefix: &str, out: &mut Vec<String>) {
        let head = match &self.predicate {
            Some(p) => format!("{prefix}{p}: expected {}, found {}", self.expected, self.found),
            None => format!("{prefix}expected {}, found {}", self.expected, self.found),
        };
        out.push(head);
        for r in &self.nested {
            let inner = format!("{prefix}{}@{} > ", r.node, r.shape);
            for reason in &r.reasons {
                reason.flatten(&inner, out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeShapeResult {
    pub node: RdfTerm,
    pub shape: ShapeLabel,
    pub status: Status,
    pub reasons: Vec<Reason>,
}

impl NodeShapeResult {
    /// Reasons as flat `path > ...: expected X, found Y` lines.
    pub fn reason_paths(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.reasons {
            r.flatten("", &mut out);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub nodes: usize,
    pub conformant: usize,
    pub nonconformant: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub results: Vec<NodeShapeResult>,
    pub stats: Stats,
}

impl ValidationReport {
    pub fn new(results: Vec<NodeShapeResult>, elapsed_ms: f64) -> Self {
        let conformant = results.iter().filter(|r| r.status.is_conformant()).count();
        let stats = Stats { nodes: results.len(), conformant, nonconformant: results.len() - conformant, elapsed_ms };
        ValidationReport { results, stats }
    }

    pub fn is_conformant(&self) -> bool {
        self.stats.nonconformant == 0
    }

    pub fn status_of(&self, node: &RdfTerm, shape: &ShapeLabel) -> Option<Status> {
        self.results.iter().find(|r| &r.node == node && &r.shape == shape).map(|r| r.status)
    }

    /// One JSON object per result, IRIs compacted with `prefixes`.
    pub fn to_jsonl(&self, prefixes: &[(String, String)]) -> String {
        let c = Compactor::new(prefixes);
        let mut out = String::new();
        for r in &self.results {
            let shape = match &r.shape {
                ShapeLabel::Iri(i) => c.iri(i),
                other => other.to_string(),
            };
            let record = json!({
                "node": c.term(&r.node),
                "shape": shape,
                "status": r.status.to_string(),
                "reasons": r.reason_paths(),
            });
            out.push_str(&record.to_string());
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{} nodes: {} conformant, {} nonconformant, {:.3} ms",
            self.stats.nodes, self.stats.conformant, self.stats.nonconformant, self.stats.elapsed_ms
        )
    }
}
