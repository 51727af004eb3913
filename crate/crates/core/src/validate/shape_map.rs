use thiserror::Error;

use crate::rdf::{Iri, RdfTerm};
use crate::shape::ShapeLabel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeMapError {
    #[error("entry {0:?} is not of the form node@shape")]
    Entry(String),
    #[error("undefined prefix {0:?}")]
    UndefinedPrefix(String),
    #[error("cannot read {0:?} as an IRI, prefixed name or blank node")]
    Term(String),
}

fn term(text: &str, prefixes: &[(String, String)]) -> Result<RdfTerm, ShapeMapError> {
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Ok(RdfTerm::iri(inner));
    }
    if let Some(label) = text.strip_prefix("_:") {
        return Ok(RdfTerm::bnode(label));
    }
    let (prefix, local) = text.split_once(':').ok_or_else(|| ShapeMapError::Term(text.to_string()))?;
    let ns = prefixes
        .iter()
        .find(|(p, _)| p == prefix)
        .map(|(_, ns)| ns)
        .ok_or_else(|| ShapeMapError::UndefinedPrefix(prefix.to_string()))?;
    Ok(RdfTerm::Iri(Iri::new(format!("{ns}{local}"))))
}

/// Reads `node@shape` entries separated by `;` or `,`. Nodes and shapes are
/// `<iri>`, `prefix:local` or `_:label`.
pub fn parse_shape_map(text: &str, prefixes: &[(String, String)]) -> Result<Vec<(RdfTerm, ShapeLabel)>, ShapeMapError> {
    let mut out = Vec::new();
    for entry in text.split([';', ',']).map(str::trim).filter(|e| !e.is_empty()) {
        let (node, shape) = entry.rsplit_once('@').ok_or_else(|| ShapeMapError::Entry(entry.to_string()))?;
        let node = term(node.trim(), prefixes)?;
        let shape = match term(shape.trim(), prefixes)? {
            RdfTerm::Iri(i) => ShapeLabel::Iri(i),
            RdfTerm::BNode(b) => ShapeLabel::BNode(b.to_string()),
            RdfTerm::Literal(_) => return Err(ShapeMapError::Term(shape.to_string())),
        };
        out.push((node, shape));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixed_and_full_forms() {
        let px = vec![(String::new(), "http://example.org/".to_string())];
        let got = parse_shape_map(":Spain@:Country; <http://x/a>@<http://x/S>", &px).unwrap();
        assert_eq!(got[0], (RdfTerm::iri("http://example.org/Spain"), ShapeLabel::iri("http://example.org/Country")));
        assert_eq!(got[1], (RdfTerm::iri("http://x/a"), ShapeLabel::iri("http://x/S")));
        assert_eq!(parse_shape_map("no:x@:S", &px), Err(ShapeMapError::UndefinedPrefix("no".into())));
        assert!(matches!(parse_shape_map(":x", &px), Err(ShapeMapError::Entry(_))));
    }
}
