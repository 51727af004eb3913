//! ShEx compact syntax: parser and serializer.

mod lexer;
mod parser;
mod writer;

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::shape::{Schema, ShapeLabel};

pub use parser::parse_shexc_document;
pub(crate) use writer::card_text;
pub use writer::{serialize_shexc, shape_expr_to_shexc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShexError {
    #[error("syntax error at {line}:{col} near `{token}`: {message}")]
    Syntax { line: usize, col: usize, token: String, message: String },
    #[error("undefined prefix `{prefix}:` at {line}:{col}")]
    UndefinedPrefix { prefix: String, line: usize, col: usize },
    #[error("shape {label} defined twice (second definition at {line}:{col})")]
    DuplicateLabel { label: String, line: usize, col: usize },
}

/// A non-fatal remark produced while parsing, e.g. a skipped semantic action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShexWarning {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ShexWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// Source positions, 1-based `(line, column)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: (usize, usize),
    pub end: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct ShexDocument {
    pub source: String,
    pub schema: Schema,
    pub spans: IndexMap<ShapeLabel, Span>,
    pub warnings: Vec<ShexWarning>,
}

/// Parses ShExC text into a schema whose structure mirrors the source.
pub fn parse_shexc(text: &str) -> Result<Schema, ShexError> {
    parse_shexc_document(text).map(|d| d.schema)
}
