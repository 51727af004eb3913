use std::fmt;
use std::sync::Arc;

use super::vocab::{rdf, xsd};

/// An absolute IRI.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Self {
        Iri(Arc::from(value.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the IRI carries a scheme (`scheme:...`).
    pub fn is_absolute(value: &str) -> bool {
        let Some(colon) = value.find(':') else {
            return false;
        };
        let scheme = &value[..colon];
        let mut chars = scheme.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl From<&str> for Iri {
    fn from(value: &str) -> Self {
        Iri::new(value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    lang: Option<Arc<str>>,
}

impl Literal {
    /// A plain string literal (`xsd:string`).
    pub fn string(lexical: impl AsRef<str>) -> Self {
        Literal { lexical: Arc::from(lexical.as_ref()), datatype: Iri::new(xsd::STRING), lang: None }
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal { lexical: Arc::from(lexical.as_ref()), datatype, lang: None }
    }

    /// Language-tagged literal; the datatype is always `rdf:langString`.
    pub fn lang(lexical: impl AsRef<str>, tag: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: Iri::new(rdf::LANG_STRING),
            lang: Some(Arc::from(tag.as_ref().to_ascii_lowercase().as_str())),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn lang_tag(&self) -> Option<&str> {
        self.lang.as_deref()
    }
}

/// An RDF term. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RdfTerm {
    Iri(Iri),
    BNode(Arc<str>),
    Literal(Literal),
}

impl RdfTerm {
    pub fn iri(value: impl AsRef<str>) -> Self {
        RdfTerm::Iri(Iri::new(value))
    }

    pub fn bnode(label: impl AsRef<str>) -> Self {
        RdfTerm::BNode(Arc::from(label.as_ref()))
    }

    pub fn string(lexical: impl AsRef<str>) -> Self {
        RdfTerm::Literal(Literal::string(lexical))
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: impl AsRef<str>) -> Self {
        RdfTerm::Literal(Literal::typed(lexical, Iri::new(datatype)))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            RdfTerm::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            RdfTerm::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, RdfTerm::Iri(_))
    }

    pub fn is_bnode(&self) -> bool {
        matches!(self, RdfTerm::BNode(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, RdfTerm::Literal(_))
    }
}

impl From<Iri> for RdfTerm {
    fn from(iri: Iri) -> Self {
        RdfTerm::Iri(iri)
    }
}

impl From<Literal> for RdfTerm {
    fn from(lit: Literal) -> Self {
        RdfTerm::Literal(lit)
    }
}

impl fmt::Display for RdfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdfTerm::Iri(iri) => write!(f, "{iri}"),
            RdfTerm::BNode(label) => write!(f, "_:{label}"),
            RdfTerm::Literal(lit) => {
                write!(f, "\"{}\"", escape_string(lit.lexical()))?;
                if let Some(tag) = lit.lang_tag() {
                    write!(f, "@{tag}")
                } else if lit.datatype().as_str() != xsd::STRING {
                    write!(f, "^^{}", lit.datatype())
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Escapes a lexical form for a double-quoted Turtle string.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

/// A triple. The subject is an IRI or blank node, never a literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: RdfTerm,
    pub predicate: Iri,
    pub object: RdfTerm,
}

impl Triple {
    pub fn new(subject: RdfTerm, predicate: Iri, object: RdfTerm) -> Result<Self, super::RdfError> {
        if subject.is_literal() {
            return Err(super::RdfError::LiteralSubject(subject.to_string()));
        }
        Ok(Triple { subject, predicate, object })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lang_literal_has_lang_string_datatype() {
        let lit = Literal::lang("Spain", "EN");
        assert_eq!(lit.datatype().as_str(), rdf::LANG_STRING);
        assert_eq!(lit.lang_tag(), Some("en"));
    }

    #[test]
    fn structural_equality() {
        assert_eq!(RdfTerm::string("ES"), RdfTerm::typed("ES", xsd::STRING));
        assert_ne!(RdfTerm::string("ES"), RdfTerm::typed("ES", xsd::TOKEN));
        assert_ne!(RdfTerm::iri("http://a/"), RdfTerm::bnode("http://a/"));
    }

    #[test]
    fn literal_subject_rejected() {
        assert!(Triple::new(RdfTerm::string("x"), Iri::new("http://p"), RdfTerm::string("y")).is_err());
    }

    #[test]
    fn absolute_iri_detection() {
        assert!(Iri::is_absolute("http://example.org/"));
        assert!(Iri::is_absolute("urn:x"));
        assert!(!Iri::is_absolute("foo/bar"));
        assert!(!Iri::is_absolute("#frag"));
        assert!(!Iri::is_absolute(""));
    }
}
