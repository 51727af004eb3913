use std::collections::{BTreeSet, HashMap, HashSet};

use super::{
    NodeConstraint, PropertyConstraint, QualifiedValueShape, ScopeMap, ShaclError, ShaclSchema, ShaclShape,
    ShaclWarning,
};
use crate::rdf::vocab::{rdf, sh, xsd};
use crate::rdf::{Graph, Iri, RdfTerm};
use crate::shape::{NodeKind, ShapeLabel};

/// Local names of the `sh:` terms the loader interprets. Any other `sh:`
/// predicate or constraint type produces a warning.
pub const SUPPORTED_TERMS: &[&str] = &[
    "Shape",
    "property",
    "constraint",
    "predicate",
    "datatype",
    "hasValue",
    "in",
    "nodeKind",
    "valueShape",
    "minCount",
    "maxCount",
    "qualifiedValueShape",
    "qualifiedMinCount",
    "qualifiedMaxCount",
    "filterShape",
    "scopeNode",
    "scopeClass",
    "OrConstraint",
    "AndConstraint",
    "NotConstraint",
    "ClosedShapeConstraint",
    "shapes",
    "shape",
    "ignoredProperties",
    "closed",
    "IRI",
    "BlankNode",
    "Literal",
];

fn sh(local: &str) -> Iri {
    Iri::new(format!("{}{local}", sh::NS))
}

fn sh_local(iri: &Iri) -> Option<&str> {
    iri.as_str().strip_prefix(sh::NS)
}

/// Builds the constraint tree of every `sh:Shape` in `g`, together with the
/// blank shapes they refer to.
pub fn load_shacl(g: &Graph) -> Result<(ShaclSchema, Vec<ShaclWarning>), ShaclError> {
    let mut loader = Loader { g, schema: ShaclSchema::default(), warnings: Vec::new(), loading: HashSet::new() };
    loader.schema.prefixes = g.prefixes().to_vec();
    let rdf_type = Iri::new(rdf::TYPE);
    let mut named: Vec<RdfTerm> = g.subjects_for(&rdf_type, &RdfTerm::Iri(sh("Shape"))).into_iter().cloned().collect();
    for scope in ["scopeNode", "scopeClass"] {
        let p = sh(scope);
        for t in g.iter().filter(|t| t.predicate == p) {
            if !named.contains(&t.subject) {
                named.push(t.subject.clone());
            }
        }
    }
    for node in &named {
        let label = ShapeLabel::from_term(node).expect("subjects are never literals");
        loader.schema.named.push(label.clone());
        loader.shape_ref(node)?;
    }
    let mut scopes = ScopeMap::default();
    for node in &named {
        let label = ShapeLabel::from_term(node).unwrap();
        for v in g.values_for(node, &sh("scopeNode")) {
            scopes.node_scopes.push((label.clone(), v.clone()));
        }
        for v in g.values_for(node, &sh("scopeClass")) {
            let class = v.as_iri().ok_or_else(|| bad(node, "scopeClass", "class must be an IRI"))?;
            scopes.class_scopes.push((label.clone(), class.clone()));
        }
    }
    loader.schema.scopes = scopes;
    check_negation(&loader.schema)?;
    Ok((loader.schema, loader.warnings))
}

fn bad(node: &RdfTerm, term: &str, message: &str) -> ShaclError {
    ShaclError::BadValue { term: format!("sh:{term}"), node: node.to_string(), message: message.to_string() }
}

struct Loader<'a> {
    g: &'a Graph,
    schema: ShaclSchema,
    warnings: Vec<ShaclWarning>,
    loading: HashSet<ShapeLabel>,
}

impl Loader<'_> {
    fn warn(&mut self, term: &Iri, shape: &ShapeLabel) {
        let w = ShaclWarning { term: term.clone(), shape: shape.clone() };
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    /// Loads the shape described at `node` (once) and returns its label.
    fn shape_ref(&mut self, node: &RdfTerm) -> Result<ShapeLabel, ShaclError> {
        let label = ShapeLabel::from_term(node).ok_or_else(|| bad(node, "shape", "a literal cannot be a shape"))?;
        if self.schema.shapes.contains_key(&label) || self.loading.contains(&label) {
            return Ok(label);
        }
        if self.g.triples_out(node).is_empty() && !self.schema.named.contains(&label) {
            return Err(ShaclError::UndefinedShape(label));
        }
        self.loading.insert(label.clone());
        let shape = self.load_shape(node, &label)?;
        self.loading.remove(&label);
        self.schema.shapes.insert(label.clone(), shape);
        Ok(label)
    }

    fn load_shape(&mut self, node: &RdfTerm, label: &ShapeLabel) -> Result<ShaclShape, ShaclError> {
        let mut shape = ShaclShape::default();
        let mut closed = false;
        let mut ignored = BTreeSet::new();
        for t in self.g.triples_out(node) {
            let Some(local) = sh_local(&t.predicate) else {
                if t.predicate.as_str() == rdf::TYPE {
                    if let Some(class) = t.object.as_iri().and_then(sh_local) {
                        if class != "Shape" {
                            self.warn(t.object.as_iri().unwrap(), label);
                        }
                    }
                }
                continue;
            };
            match local {
                "property" => {
                    let p = self.property(&t.object, label)?;
                    shape.properties.push(p);
                }
                "constraint" => {
                    let ncs = self.node_constraint(&t.object, label)?;
                    shape.node_constraints.extend(ncs);
                }
                "filterShape" => shape.filter = Some(self.shape_ref(&t.object)?),
                "scopeNode" | "scopeClass" => {}
                "closed" => closed = bool_value(&t.object).ok_or_else(|| bad(node, "closed", "expected a boolean"))?,
                "ignoredProperties" => ignored.extend(self.iri_list(&t.object)?),
                _ => self.warn(&t.predicate, label),
            }
        }
        if closed {
            shape.node_constraints.push(NodeConstraint::Closed { ignored });
        }
        Ok(shape)
    }

    fn property(&mut self, node: &RdfTerm, shape: &ShapeLabel) -> Result<PropertyConstraint, ShaclError> {
        let predicate = self
            .g
            .values_for(node, &sh("predicate"))
            .first()
            .and_then(|v| v.as_iri().cloned())
            .ok_or_else(|| ShaclError::MissingPredicate { shape: shape.clone(), node: node.to_string() })?;
        let mut pc = PropertyConstraint::new(predicate);
        let mut qualified: Option<ShapeLabel> = None;
        let (mut qmin, mut qmax) = (None, None);
        for t in self.g.triples_out(node) {
            let Some(local) = sh_local(&t.predicate) else { continue };
            match local {
                "predicate" => {}
                "datatype" => pc.datatype = Some(iri_value(node, "datatype", &t.object)?),
                "hasValue" => pc.has_value = Some(t.object.clone()),
                "in" => pc.in_set = Some(self.list(&t.object)?),
                "nodeKind" => pc.node_kind = self.node_kind(node, &t.object, shape)?,
                "valueShape" => pc.value_shape = Some(self.shape_ref(&t.object)?),
                "minCount" => pc.min_count = count(node, "minCount", &t.object)?,
                "maxCount" => pc.max_count = Some(count(node, "maxCount", &t.object)?),
                "qualifiedValueShape" => qualified = Some(self.shape_ref(&t.object)?),
                "qualifiedMinCount" => qmin = Some(count(node, "qualifiedMinCount", &t.object)?),
                "qualifiedMaxCount" => qmax = Some(count(node, "qualifiedMaxCount", &t.object)?),
                "filterShape" => pc.filter_shape = Some(self.shape_ref(&t.object)?),
                _ => self.warn(&t.predicate, shape),
            }
        }
        if let Some(max) = pc.max_count {
            if pc.min_count > max {
                return Err(bad(node, "maxCount", "smaller than sh:minCount"));
            }
        }
        match qualified {
            Some(q) => pc.qualified = Some(QualifiedValueShape { shape: q, min: qmin, max: qmax }),
            None if qmin.is_some() || qmax.is_some() => {
                return Err(bad(node, "qualifiedMinCount", "no sh:qualifiedValueShape given"))
            }
            None => {}
        }
        Ok(pc)
    }

    fn node_kind(&mut self, node: &RdfTerm, v: &RdfTerm, shape: &ShapeLabel) -> Result<Option<NodeKind>, ShaclError> {
        let iri = iri_value(node, "nodeKind", v)?;
        Ok(match sh_local(&iri) {
            Some("IRI") => Some(NodeKind::Iri),
            Some("BlankNode") => Some(NodeKind::BNode),
            Some("Literal") => Some(NodeKind::Literal),
            _ => {
                self.warn(&iri, shape);
                None
            }
        })
    }

    /// The constraints described by one `sh:constraint` object.
    fn node_constraint(&mut self, node: &RdfTerm, shape: &ShapeLabel) -> Result<Vec<NodeConstraint>, ShaclError> {
        let types: Vec<Iri> =
            self.g.values_for(node, &Iri::new(rdf::TYPE)).into_iter().filter_map(|t| t.as_iri().cloned()).collect();
        let mut out = Vec::new();
        let mut typed = false;
        for ty in &types {
            match sh_local(ty) {
                Some("OrConstraint") | Some("AndConstraint") => {
                    typed = true;
                    let mut labels = Vec::new();
                    for list in self.g.values_for(node, &sh("shapes")) {
                        for member in self.list(list)? {
                            labels.push(self.shape_ref(&member)?);
                        }
                    }
                    out.push(if sh_local(ty) == Some("OrConstraint") {
                        NodeConstraint::Or(labels)
                    } else {
                        NodeConstraint::And(labels)
                    });
                }
                Some("NotConstraint") => {
                    typed = true;
                    let inner = self.g.values_for(node, &sh("shape"));
                    let [inner] = inner.as_slice() else {
                        return Err(bad(node, "shape", "sh:NotConstraint needs exactly one sh:shape"));
                    };
                    let inner = (*inner).clone();
                    out.push(NodeConstraint::Not(self.shape_ref(&inner)?));
                }
                Some("ClosedShapeConstraint") => {
                    typed = true;
                    let mut ignored = BTreeSet::new();
                    for list in self.g.values_for(node, &sh("ignoredProperties")) {
                        ignored.extend(self.iri_list(list)?);
                    }
                    out.push(NodeConstraint::Closed { ignored });
                }
                _ => self.warn(ty, shape),
            }
        }
        for t in self.g.triples_out(node) {
            let Some(local) = sh_local(&t.predicate) else { continue };
            match local {
                "shapes" | "shape" | "ignoredProperties" if typed => {}
                "in" => out.push(NodeConstraint::In(self.list(&t.object)?)),
                "datatype" => out.push(NodeConstraint::Datatype(iri_value(node, "datatype", &t.object)?)),
                "hasValue" => out.push(NodeConstraint::HasValue(t.object.clone())),
                "nodeKind" => {
                    if let Some(kind) = self.node_kind(node, &t.object, shape)? {
                        out.push(NodeConstraint::NodeKind(kind));
                    }
                }
                _ => self.warn(&t.predicate, shape),
            }
        }
        Ok(out)
    }

    /// Members of a well-terminated RDF list.
    fn list(&self, head: &RdfTerm) -> Result<Vec<RdfTerm>, ShaclError> {
        let first = Iri::new(rdf::FIRST);
        let rest = Iri::new(rdf::REST);
        let nil = RdfTerm::iri(rdf::NIL);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut cur = head.clone();
        while cur != nil {
            if !seen.insert(cur.clone()) {
                return Err(ShaclError::MalformedList(head.to_string()));
            }
            let f = self.g.values_for(&cur, &first);
            let r = self.g.values_for(&cur, &rest);
            let ([f], [r]) = (f.as_slice(), r.as_slice()) else {
                return Err(ShaclError::MalformedList(head.to_string()));
            };
            out.push((*f).clone());
            cur = (*r).clone();
        }
        Ok(out)
    }

    fn iri_list(&self, head: &RdfTerm) -> Result<Vec<Iri>, ShaclError> {
        self.list(head)?.into_iter().map(|t| iri_value(head, "ignoredProperties", &t)).collect()
    }
}

fn iri_value(node: &RdfTerm, term: &str, v: &RdfTerm) -> Result<Iri, ShaclError> {
    v.as_iri().cloned().ok_or_else(|| bad(node, term, "expected an IRI"))
}

fn count(node: &RdfTerm, term: &str, v: &RdfTerm) -> Result<u32, ShaclError> {
    v.as_literal()
        .filter(|l| l.datatype().as_str() == xsd::INTEGER)
        .and_then(|l| l.lexical().parse::<u32>().ok())
        .ok_or_else(|| ShaclError::BadCount { term: format!("sh:{term}"), node: node.to_string() })
}

fn bool_value(v: &RdfTerm) -> Option<bool> {
    let lit = v.as_literal().filter(|l| l.datatype().as_str() == xsd::BOOLEAN)?;
    match lit.lexical() {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

/// Rejects shapes whose `Not` operand can reach back to the shape itself.
fn check_negation(schema: &ShaclSchema) -> Result<(), ShaclError> {
    let edges: HashMap<&ShapeLabel, Vec<(&ShapeLabel, bool)>> =
        schema.shapes.iter().map(|(l, s)| (l, s.references())).collect();
    for (label, out) in &edges {
        for (target, negated) in out {
            if !negated {
                continue;
            }
            // depth-first search from target back to label
            let mut parent: HashMap<&ShapeLabel, &ShapeLabel> = HashMap::new();
            let mut stack = vec![*target];
            let mut seen: HashSet<&ShapeLabel> = HashSet::from([*target]);
            while let Some(cur) = stack.pop() {
                if cur == *label {
                    let mut path = vec![cur.clone()];
                    let mut at = cur;
                    while let Some(p) = parent.get(at) {
                        path.push((*p).clone());
                        at = p;
                    }
                    path.push((*label).clone());
                    path.reverse();
                    return Err(ShaclError::NegationCycle(path));
                }
                for (next, _) in edges.get(cur).map(|v| v.as_slice()).unwrap_or(&[]) {
                    if seen.insert(next) {
                        parent.insert(next, cur);
                        stack.push(next);
                    }
                }
            }
        }
    }
    Ok(())
}
