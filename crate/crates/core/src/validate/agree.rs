use thiserror::Error;

use super::report::NodeShapeResult;
use super::shacl::{validate_shacl_pairs, ShaclValidationError};
use super::shex::{ShexEngine, ShexValidationError};
use crate::rdf::{Graph, RdfTerm};
use crate::shacl::ShaclSchema;
use crate::shape::{Schema, ShapeLabel};

/// A pair the two engines judge differently, with both explanations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub node: RdfTerm,
    pub shape: ShapeLabel,
    pub shex: NodeShapeResult,
    pub shacl: NodeShapeResult,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgreementError {
    #[error(transparent)]
    Shex(#[from] ShexValidationError),
    #[error(transparent)]
    Shacl(#[from] ShaclValidationError),
}

pub fn engines_agree(
    graph: &Graph,
    shex: &Schema,
    shacl: &ShaclSchema,
    pairs: &[(RdfTerm, ShapeLabel)],
) -> Result<Vec<Disagreement>, AgreementError> {
    let a = ShexEngine::new(shex)?.validate_shape_map(graph, pairs)?;
    let b = validate_shacl_pairs(graph, shacl, pairs, 1)?;
    Ok(a.results
        .into_iter()
        .zip(b.results)
        .filter(|(x, y)| x.status != y.status)
        .map(|(x, y)| Disagreement { node: x.node.clone(), shape: x.shape.clone(), shex: x, shacl: y })
        .collect())
}
