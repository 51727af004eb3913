use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{Mutation, ShapeKind};
use crate::rdf::{Iri, RdfTerm};
use crate::schemas::shape_iri;
use crate::shape::ShapeLabel;
use crate::validate::Status;

/// What was generated: every node per template shape, and which of them
/// were mutated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenManifest {
    pub seed: u64,
    pub nodes: BTreeMap<ShapeKind, Vec<Iri>>,
    pub invalid: Vec<(Iri, ShapeKind, Mutation)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl GenManifest {
    pub fn node_count(&self) -> usize {
        self.nodes.values().map(Vec::len).sum()
    }

    pub fn count(&self, kind: ShapeKind) -> usize {
        self.nodes.get(&kind).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    pub fn mutation_of(&self, node: &Iri) -> Option<Mutation> {
        self.invalid.iter().find(|(n, _, _)| n == node).map(|(_, _, m)| *m)
    }

    /// Every (node, template shape) pair, shapes in schema order.
    pub fn pairs(&self) -> Vec<(RdfTerm, ShapeLabel)> {
        self.nodes
            .iter()
            .flat_map(|(kind, iris)| {
                let label = kind.label();
                iris.iter().map(move |iri| (RdfTerm::Iri(iri.clone()), label.clone()))
            })
            .collect()
    }

    /// The verdict each pair must receive.
    pub fn expected(&self) -> Vec<(RdfTerm, ShapeLabel, Status)> {
        self.pairs()
            .into_iter()
            .map(|(node, label)| {
                let bad = node.as_iri().is_some_and(|iri| self.mutation_of(iri).is_some());
                let status = if bad { Status::Nonconformant } else { Status::Conformant };
                (node, label, status)
            })
            .collect()
    }

    /// Tab-separated `shape iri validity mutation`, one node per line,
    /// after a `# seed=` header.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# seed={}\nshape\tiri\tvalidity\tmutation\n", self.seed);
        for (kind, iris) in &self.nodes {
            for iri in iris {
                let (validity, mutation) = match self.mutation_of(iri) {
                    Some(m) => ("invalid", m.name()),
                    None => ("valid", "-"),
                };
                let _ = writeln!(out, "{}\t{}\t{validity}\t{mutation}", kind.name(), iri.as_str());
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, ManifestError> {
        let mut m = GenManifest::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let bad = |message: String| ManifestError::Malformed { line: line_no, message };
            if let Some(seed) = line.strip_prefix("# seed=") {
                m.seed = seed.trim().parse().map_err(|_| bad(format!("bad seed {seed:?}")))?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') || line.starts_with("shape\t") {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [shape, iri, validity, mutation] = cols[..] else {
                return Err(bad(format!("expected 4 columns, found {}", cols.len())));
            };
            let kind = ShapeKind::from_str(shape).map_err(bad)?;
            let iri = Iri::new(iri);
            match validity {
                "valid" => {}
                "invalid" => {
                    let m2 = Mutation::from_str(mutation).map_err(bad)?;
                    m.invalid.push((iri.clone(), kind, m2));
                }
                other => return Err(bad(format!("validity {other:?}"))),
            }
            m.nodes.entry(kind).or_default().push(iri);
        }
        Ok(m)
    }
}

impl ShapeKind {
    pub fn label(self) -> ShapeLabel {
        ShapeLabel::Iri(Iri::new(shape_iri(self.name())))
    }
}
