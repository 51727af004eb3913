//! Shape validation for RDF graphs: ShEx compact syntax and SHACL core,
//! a bag-semantics matcher with recursion support, a WebIndex-style data
//! generator and a benchmark harness.

pub mod bench;
pub mod cli;
pub mod rdf;
pub mod schemas;
pub mod shacl;
pub mod shape;
pub mod shexc;
pub mod validate;
pub mod wigen;
