//! Namespace constants for the vocabularies the toolkit touches.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const TOKEN: &str = "http://www.w3.org/2001/XMLSchema#token";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
    pub const G_YEAR: &str = "http://www.w3.org/2001/XMLSchema#gYear";
}

pub mod sh {
    pub const NS: &str = "http://www.w3.org/ns/shacl#";
}

/// Prefixes used by the WebIndex model.
pub mod wi {
    pub const EX: &str = "http://example.org/";
    pub const WF: &str = "http://data.webfoundation.org#";
    pub const QB: &str = "http://purl.org/linked-data/cube#";
    pub const CEX: &str = "http://purl.org/weso/ontology/computex#";
    pub const DCT: &str = "http://purl.org/dc/terms/";
    pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";
    pub const ORG: &str = "http://www.w3.org/ns/org#";
    pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
    pub const DC: &str = "http://purl.org/dc/elements/1.1/";
}

/// The prefix table shared by fixtures, the generator and the writers.
pub fn standard_prefixes() -> Vec<(String, String)> {
    [
        ("", wi::EX),
        ("rdf", rdf::NS),
        ("rdfs", rdfs::NS),
        ("xsd", xsd::NS),
        ("sh", sh::NS),
        ("wf", wi::WF),
        ("qb", wi::QB),
        ("cex", wi::CEX),
        ("dct", wi::DCT),
        ("skos", wi::SKOS),
        ("foaf", wi::FOAF),
        ("org", wi::ORG),
    ]
    .into_iter()
    .map(|(p, ns)| (p.to_string(), ns.to_string()))
    .collect()
}
