use std::collections::BTreeSet;

use indexmap::IndexMap;

use super::lexer::{tokenize, Spanned, Tok};
use super::{ShexDocument, ShexError, ShexWarning, Span};
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, RdfTerm};
use crate::shape::{
    Cardinality, NodeConstraint, NodeKind, Schema, Shape, ShapeExpr, ShapeLabel, TripleConstraint, TripleExpr,
};

/// Parses ShExC text, keeping spans per shape and warnings for skipped
/// constructs.
pub fn parse_shexc_document(text: &str) -> Result<ShexDocument, ShexError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, prefixes: Vec::new(), warnings: Vec::new() };
    let mut shapes = IndexMap::new();
    let mut spans = IndexMap::new();
    loop {
        p.skip_semacts();
        match p.peek() {
            Tok::Eof => break,
            Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                p.next();
                p.prefix_decl()?;
            }
            Tok::At if p.peek_n(1).is_word("prefix") => {
                p.next();
                p.next();
                p.prefix_decl()?;
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                return p.err("base declarations are not supported");
            }
            Tok::IriRef(_) | Tok::PName { .. } | Tok::BNode(_) => {
                let start = p.here();
                let start = (start.line, start.col);
                let label = p.label()?;
                let expr = p.shape_expr()?;
                let last = &p.toks[p.pos - 1];
                let end = (last.line, last.col + last.tok.describe().chars().count());
                if shapes.contains_key(&label) {
                    return Err(ShexError::DuplicateLabel { label: label.to_string(), line: start.0, col: start.1 });
                }
                spans.insert(label.clone(), Span { start, end });
                shapes.insert(label, expr);
            }
            _ => return p.err("expected a prefix declaration or a shape label"),
        }
    }
    Ok(ShexDocument {
        source: text.to_string(),
        schema: Schema { shapes, prefixes: p.prefixes },
        spans,
        warnings: p.warnings,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ListKind {
    Single,
    Each,
    One,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: Vec<(String, String)>,
    warnings: Vec<ShexWarning>,
}

impl Parser {
    fn here(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_n(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: &str) -> Result<T, ShexError> {
        let t = self.here();
        Err(ShexError::Syntax { line: t.line, col: t.col, token: t.tok.describe(), message: message.to_string() })
    }

    fn expect(&mut self, tok: Tok, message: &str) -> Result<(), ShexError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.err(message)
        }
    }

    fn skip_semacts(&mut self) {
        while let Tok::SemAct(_) = self.peek() {
            let t = self.next();
            self.warnings.push(ShexWarning {
                line: t.line,
                col: t.col,
                message: format!("semantic action {} ignored", t.tok.describe()),
            });
        }
    }

    fn prefix_decl(&mut self) -> Result<(), ShexError> {
        let prefix = match self.peek() {
            Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return self.err("expected a prefix name ending in `:`"),
        };
        self.next();
        let ns = match self.peek() {
            Tok::IriRef(v) if Iri::is_absolute(v) => v.clone(),
            Tok::IriRef(_) => return self.err("prefix namespace must be an absolute IRI"),
            _ => return self.err("expected a namespace IRI"),
        };
        self.next();
        if *self.peek() == Tok::Dot {
            self.next();
        }
        match self.prefixes.iter_mut().find(|(p, _)| *p == prefix) {
            Some(entry) => entry.1 = ns,
            None => self.prefixes.push((prefix, ns)),
        }
        Ok(())
    }

    fn iri(&mut self) -> Result<Iri, ShexError> {
        let t = self.here().clone();
        match &t.tok {
            Tok::IriRef(v) => {
                if !Iri::is_absolute(v) {
                    return self.err("relative IRIs are not supported");
                }
                self.next();
                Ok(Iri::new(v))
            }
            Tok::PName { prefix, local } => {
                let ns =
                    self.prefixes.iter().find(|(p, _)| p == prefix).map(|(_, ns)| ns.clone()).ok_or_else(|| {
                        ShexError::UndefinedPrefix { prefix: prefix.clone(), line: t.line, col: t.col }
                    })?;
                self.next();
                Ok(Iri::new(format!("{ns}{local}")))
            }
            _ => self.err("expected an IRI"),
        }
    }

    fn label(&mut self) -> Result<ShapeLabel, ShexError> {
        if let Tok::BNode(l) = self.peek() {
            let l = l.clone();
            self.next();
            return Ok(ShapeLabel::BNode(l));
        }
        self.iri().map(ShapeLabel::Iri)
    }

    fn predicate(&mut self) -> Result<Iri, ShexError> {
        if self.peek().is_word("a") {
            self.next();
            return Ok(Iri::new(rdf::TYPE));
        }
        match self.peek() {
            Tok::IriRef(_) | Tok::PName { .. } => self.iri(),
            _ => self.err("expected a predicate"),
        }
    }

    fn is_predicate_start(&self) -> bool {
        matches!(self.peek(), Tok::IriRef(_) | Tok::PName { .. }) || self.peek().is_word("a")
    }

    fn shape_expr(&mut self) -> Result<ShapeExpr, ShexError> {
        let first = self.shape_and()?;
        if !self.peek().is_word("OR") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.peek().is_word("OR") {
            self.next();
            items.push(self.shape_and()?);
        }
        Ok(ShapeExpr::Or(items))
    }

    fn shape_and(&mut self) -> Result<ShapeExpr, ShexError> {
        let first = self.shape_not()?;
        if !self.peek().is_word("AND") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.peek().is_word("AND") {
            self.next();
            items.push(self.shape_not()?);
        }
        Ok(ShapeExpr::And(items))
    }

    fn shape_not(&mut self) -> Result<ShapeExpr, ShexError> {
        if self.peek().is_word("NOT") {
            self.next();
            return Ok(ShapeExpr::Not(Box::new(self.shape_not()?)));
        }
        self.shape_atom()
    }

    /// A `(` opens a grouped shape expression when the parenthesised tokens
    /// contain something a value set cannot; otherwise it opens a value set.
    fn group_ahead(&self) -> bool {
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match &t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen | Tok::RBracket | Tok::RBrace => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::LBracket | Tok::LBrace | Tok::At | Tok::Dot | Tok::Amp => return true,
                Tok::Word(w)
                    if matches!(
                        w.as_str(),
                        "AND" | "OR" | "NOT" | "IRI" | "LITERAL" | "BNODE" | "CLOSED" | "EXTRA"
                    ) =>
                {
                    return true
                }
                Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn shape_atom(&mut self) -> Result<ShapeExpr, ShexError> {
        match self.peek().clone() {
            Tok::At => {
                self.next();
                Ok(ShapeExpr::Ref(self.label()?))
            }
            Tok::LBrace | Tok::Amp => Ok(ShapeExpr::Shape(self.shape_def()?)),
            Tok::Word(w) if w == "CLOSED" || w == "EXTRA" => Ok(ShapeExpr::Shape(self.shape_def()?)),
            Tok::LParen if self.group_ahead() => {
                self.next();
                let e = self.shape_expr()?;
                self.expect(Tok::RParen, "expected `)`")?;
                Ok(e)
            }
            Tok::LParen | Tok::LBracket => Ok(ShapeExpr::NodeConstraint(NodeConstraint::value_set(self.value_set()?))),
            Tok::Dot => {
                self.next();
                Ok(ShapeExpr::NodeConstraint(NodeConstraint::wildcard()))
            }
            Tok::Word(w) if matches!(w.as_str(), "IRI" | "LITERAL" | "BNODE") => {
                self.next();
                let kind = match w.as_str() {
                    "IRI" => NodeKind::Iri,
                    "LITERAL" => NodeKind::Literal,
                    _ => NodeKind::BNode,
                };
                let mut nc = NodeConstraint::kind(kind);
                nc.values = self.trailing_value_set()?;
                Ok(ShapeExpr::NodeConstraint(nc))
            }
            Tok::IriRef(_) | Tok::PName { .. } => {
                let mut nc = NodeConstraint { datatype: Some(self.iri()?), ..Default::default() };
                nc.values = self.trailing_value_set()?;
                Ok(ShapeExpr::NodeConstraint(nc))
            }
            _ => self.err("expected a shape expression"),
        }
    }

    fn trailing_value_set(&mut self) -> Result<Option<BTreeSet<RdfTerm>>, ShexError> {
        match self.peek() {
            Tok::LBracket => Ok(Some(self.value_set()?)),
            Tok::LParen if !self.group_ahead() => Ok(Some(self.value_set()?)),
            _ => Ok(None),
        }
    }

    fn value_set(&mut self) -> Result<BTreeSet<RdfTerm>, ShexError> {
        let close = match self.next().tok {
            Tok::LBracket => Tok::RBracket,
            _ => Tok::RParen,
        };
        let mut values = BTreeSet::new();
        loop {
            let tok = self.peek().clone();
            if tok == close {
                self.next();
                return Ok(values);
            }
            let value = match tok {
                Tok::IriRef(_) | Tok::PName { .. } => RdfTerm::Iri(self.iri()?),
                Tok::Str(_) => self.literal()?,
                Tok::Integer(n) => self.number(n, xsd::INTEGER),
                Tok::Decimal(n) => self.number(n, xsd::DECIMAL),
                Tok::Double(n) => self.number(n, xsd::DOUBLE),
                Tok::Word(w) if w == "true" || w == "false" => self.number(w, xsd::BOOLEAN),
                _ => return self.err("expected a value set member"),
            };
            values.insert(value);
        }
    }

    fn number(&mut self, lexical: String, dt: &str) -> RdfTerm {
        self.next();
        RdfTerm::typed(lexical, dt)
    }

    fn literal(&mut self) -> Result<RdfTerm, ShexError> {
        let Tok::Str(s) = self.next().tok else { unreachable!() };
        match self.peek().clone() {
            Tok::LangTag(tag) => {
                self.next();
                Ok(RdfTerm::Literal(crate::rdf::Literal::lang(s, tag)))
            }
            Tok::Carets => {
                self.next();
                let dt = self.iri()?;
                Ok(RdfTerm::Literal(crate::rdf::Literal::typed(s, dt)))
            }
            _ => Ok(RdfTerm::string(s)),
        }
    }

    fn shape_def(&mut self) -> Result<Shape, ShexError> {
        let mut shape = Shape::default();
        loop {
            match self.peek() {
                Tok::Amp => {
                    self.next();
                    shape.includes.push(self.label()?);
                }
                t if t.is_word("CLOSED") => {
                    self.next();
                    shape.closed = true;
                }
                t if t.is_word("EXTRA") => {
                    self.next();
                    if !self.is_predicate_start() {
                        return self.err("EXTRA needs at least one predicate");
                    }
                    while self.is_predicate_start() {
                        let p = self.predicate()?;
                        shape.extra.insert(p);
                    }
                }
                Tok::LBrace => break,
                _ => return self.err("expected `{`"),
            }
        }
        self.next();
        if *self.peek() != Tok::RBrace {
            let (mut list, kind) = self.triple_expr_list()?;
            shape.expr = Some(match kind {
                ListKind::Single => list.pop().unwrap(),
                ListKind::Each => TripleExpr::each_of(list),
                ListKind::One => TripleExpr::one_of(list),
            });
        }
        self.expect(Tok::RBrace, "expected `}`")?;
        self.skip_semacts();
        Ok(shape)
    }

    fn triple_expr_list(&mut self) -> Result<(Vec<TripleExpr>, ListKind), ShexError> {
        let mut list = vec![self.unary_triple_expr()?];
        let mut kind = ListKind::Single;
        loop {
            match self.peek() {
                Tok::Comma | Tok::Semi => {
                    if kind == ListKind::One {
                        return self.err("`,` and `|` cannot be mixed without parentheses");
                    }
                    self.next();
                    if matches!(self.peek(), Tok::RBrace | Tok::RParen) {
                        break;
                    }
                    list.push(self.unary_triple_expr()?);
                    kind = ListKind::Each;
                }
                Tok::Pipe => {
                    if kind == ListKind::Each {
                        return self.err("`,` and `|` cannot be mixed without parentheses");
                    }
                    self.next();
                    list.push(self.unary_triple_expr()?);
                    kind = ListKind::One;
                }
                _ => break,
            }
        }
        Ok((list, kind))
    }

    fn unary_triple_expr(&mut self) -> Result<TripleExpr, ShexError> {
        if *self.peek() == Tok::LParen {
            self.next();
            let (exprs, kind) = self.triple_expr_list()?;
            self.expect(Tok::RParen, "expected `)`")?;
            let card = self.cardinality()?.unwrap_or(Cardinality::ONE);
            self.skip_semacts();
            return Ok(match kind {
                ListKind::One => TripleExpr::OneOf { exprs, card },
                _ => TripleExpr::EachOf { exprs, card },
            });
        }
        let mut negated = false;
        let mut inverse = false;
        loop {
            match self.peek() {
                Tok::Bang if !negated => negated = true,
                Tok::Caret if !inverse => inverse = true,
                _ => break,
            }
            self.next();
        }
        let predicate = self.predicate()?;
        let value = self.shape_expr()?;
        let card = self.cardinality()?.unwrap_or(Cardinality::ONE);
        self.skip_semacts();
        Ok(TripleExpr::Constraint(TripleConstraint { inverse, negated, predicate, value: Box::new(value), card }))
    }

    fn int(&mut self) -> Result<u32, ShexError> {
        match self.peek() {
            Tok::Integer(n) => match n.parse::<u32>() {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.err("cardinality bound must be a non-negative integer"),
            },
            _ => self.err("expected an integer"),
        }
    }

    fn cardinality(&mut self) -> Result<Option<Cardinality>, ShexError> {
        let card = match self.peek() {
            Tok::Question => Cardinality::OPTIONAL,
            Tok::Star => Cardinality::STAR,
            Tok::Plus => Cardinality::PLUS,
            Tok::LBrace if matches!(self.peek_n(1), Tok::Integer(_)) => {
                self.next();
                let min = self.int()?;
                let max = if *self.peek() == Tok::Comma {
                    self.next();
                    match self.peek() {
                        Tok::Star => {
                            self.next();
                            None
                        }
                        Tok::RBrace => None,
                        _ => Some(self.int()?),
                    }
                } else {
                    Some(min)
                };
                self.expect(Tok::RBrace, "expected `}` closing the cardinality")?;
                return Ok(Some(Cardinality::new(min, max)));
            }
            _ => return Ok(None),
        };
        self.next();
        Ok(Some(card))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shexc::parse_shexc;

    const PFX: &str = "prefix : <http://example.org/>\nprefix xsd: <http://www.w3.org/2001/XMLSchema#>\n\
                       prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#>\nprefix qb: <http://purl.org/linked-data/cube#>\n";

    fn parse(body: &str) -> Schema {
        parse_shexc(&format!("{PFX}{body}")).unwrap()
    }

    fn ex(local: &str) -> ShapeLabel {
        ShapeLabel::iri(format!("http://example.org/{local}"))
    }

    #[test]
    fn country_shape() {
        let s = parse(":Country { rdfs:label xsd:string, wf:iso2 xsd:string }".replace("wf:", ":").as_str());
        let ShapeExpr::Shape(shape) = &s.shapes[&ex("Country")] else { panic!() };
        assert!(!shape.closed);
        let TripleExpr::EachOf { exprs, card } = shape.expr.as_ref().unwrap() else { panic!() };
        assert_eq!(*card, Cardinality::ONE);
        assert_eq!(exprs.len(), 2);
        assert_eq!(exprs[0].card(), Cardinality::ONE);
    }

    #[test]
    fn empty_shape_has_no_expr() {
        let s = parse(":S { }");
        assert_eq!(s.shapes[&ex("S")], ShapeExpr::Shape(Shape::default()));
    }

    #[test]
    fn both_value_set_spellings_agree() {
        let a = parse(":S { a (qb:DataSet) }");
        let b = parse(":S { a [ qb:DataSet ] }");
        assert_eq!(a, b);
    }

    #[test]
    fn cardinalities() {
        let s = parse(":S { :a . ?, :b . *, :c . +, :d . {2}, :e . {2,5}, :f . {3,}, :g . {1,*} }");
        let ShapeExpr::Shape(shape) = &s.shapes[&ex("S")] else { panic!() };
        let cards: Vec<_> = shape.expr.as_ref().unwrap().constraints().iter().map(|tc| tc.card).collect();
        assert_eq!(
            cards,
            vec![
                Cardinality::OPTIONAL,
                Cardinality::STAR,
                Cardinality::PLUS,
                Cardinality::new(2, Some(2)),
                Cardinality::new(2, Some(5)),
                Cardinality::new(3, None),
                Cardinality::new(1, None),
            ]
        );
    }

    #[test]
    fn grouping_negation_inverse_inclusion() {
        let s = parse(
            ":Provider & :Organization CLOSED EXTRA a :p { ! :creator . , ^ :ref-area @:Obs *, ( :x IRI | :y @:C ){2} }",
        );
        let ShapeExpr::Shape(shape) = &s.shapes[&ex("Provider")] else { panic!() };
        assert_eq!(shape.includes, vec![ex("Organization")]);
        assert!(shape.closed);
        assert_eq!(shape.extra.len(), 2);
        let TripleExpr::EachOf { exprs, .. } = shape.expr.as_ref().unwrap() else { panic!() };
        let TripleExpr::Constraint(neg) = &exprs[0] else { panic!() };
        assert!(neg.negated && !neg.inverse);
        let TripleExpr::Constraint(inv) = &exprs[1] else { panic!() };
        assert!(inv.inverse && inv.card == Cardinality::STAR);
        assert!(
            matches!(&exprs[2], TripleExpr::OneOf { card, exprs } if *card == Cardinality::new(2, Some(2)) && exprs.len() == 2)
        );
    }

    #[test]
    fn mixing_separators_needs_parentheses() {
        let err = parse_shexc(&format!("{PFX}:S {{ :a . , :b . | :c . }}")).unwrap_err();
        assert!(matches!(err, ShexError::Syntax { line: 5, .. }), "{err}");
    }

    #[test]
    fn undefined_prefix_has_position() {
        let err = parse_shexc(":S { foo:bar . }").unwrap_err();
        assert_eq!(err, ShexError::UndefinedPrefix { prefix: String::new(), line: 1, col: 1 });
        let err = parse_shexc("prefix : <http://e/>\n:S { foo:bar . }").unwrap_err();
        assert_eq!(err, ShexError::UndefinedPrefix { prefix: "foo".into(), line: 2, col: 6 });
    }

    #[test]
    fn shape_boolean_operators() {
        let s = parse(":S @:T AND NOT (@:U OR { })\n:T { }\n:U { }");
        let ShapeExpr::And(items) = &s.shapes[&ex("S")] else { panic!() };
        assert_eq!(items[0], ShapeExpr::Ref(ex("T")));
        let ShapeExpr::Not(inner) = &items[1] else { panic!() };
        assert!(matches!(inner.as_ref(), ShapeExpr::Or(v) if v.len() == 2));
    }

    #[test]
    fn semantic_actions_warn() {
        let doc = parse_shexc_document(&format!("{PFX}:S {{ :a . %js{{ return 1; %}} }}")).unwrap();
        assert_eq!(doc.warnings.len(), 1);
        assert_eq!(doc.spans[&ex("S")].start, (5, 1));
    }

    #[test]
    fn literal_value_sets() {
        let s = parse(":S { :p [ \"a\" \"b\"@en 1 2.5 true \"x\"^^xsd:token ] }");
        let ShapeExpr::Shape(shape) = &s.shapes[&ex("S")] else { panic!() };
        let tc = shape.expr.as_ref().unwrap().constraints()[0].clone();
        let ShapeExpr::NodeConstraint(nc) = *tc.value else { panic!() };
        let values = nc.values.unwrap();
        assert_eq!(values.len(), 6);
        assert!(values.contains(&RdfTerm::typed("1", xsd::INTEGER)));
        assert!(values.contains(&RdfTerm::string("a")));
    }
}
