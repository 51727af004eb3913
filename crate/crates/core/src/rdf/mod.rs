//! RDF terms, an immutable indexed graph, and a Turtle-subset reader/writer.

mod graph;
mod term;
mod turtle;
pub mod vocab;
mod write;

use thiserror::Error;

pub use graph::Graph;
pub use term::{escape_string, Iri, Literal, RdfTerm, Triple};
pub use turtle::parse_turtle;
pub use write::{serialize_turtle, Compactor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("syntax error at {line}:{col} near `{token}`: {message}")]
    Syntax { line: usize, col: usize, token: String, message: String },
    #[error("undefined prefix `{prefix}:` at {line}:{col}")]
    UndefinedPrefix { prefix: String, line: usize, col: usize },
    #[error("relative IRI <{iri}> at {line}:{col}")]
    RelativeIri { iri: String, line: usize, col: usize },
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(String),
}
