//! The WebIndex schemas and sample data bundled with the crate.

/// Recursive ShEx schema for the WebIndex model.
pub const WEBINDEX_SHEX: &str = include_str!("../schemas/webindex.shex");
/// Recursive SHACL shapes graph for the WebIndex model.
pub const WEBINDEX_SHACL: &str = include_str!("../schemas/webindex_shacl.ttl");
/// ShEx variant where shape references are replaced by `IRI`.
pub const WEBINDEX_NONREC_SHEX: &str = include_str!("../schemas/webindex_nonrec.shex");
/// SHACL variant with `sh:nodeKind sh:IRI` instead of value shapes, scoped by class.
pub const WEBINDEX_NONREC_SHACL: &str = include_str!("../schemas/webindex_nonrec_shacl.ttl");
/// A small closed graph with one node of every WebIndex shape.
pub const WEBINDEX_SAMPLE: &str = include_str!("../schemas/webindex_sample.ttl");

/// Local names of the seven WebIndex shapes, in schema order.
pub const SHAPE_NAMES: [&str; 7] =
    ["Country", "DataSet", "Slice", "Observation", "Computation", "Indicator", "Organization"];

/// IRI of a WebIndex shape label, e.g. `http://example.org/Country`.
pub fn shape_iri(name: &str) -> String {
    format!("{}{name}", crate::rdf::vocab::wi::EX)
}
