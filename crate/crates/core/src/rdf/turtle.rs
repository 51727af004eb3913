//! Reader for the Turtle subset used by shape documents and data files.
//!
//! Supported: `@prefix`/`PREFIX` directives, absolute IRIs, prefixed names,
//! `a`, predicate-object lists with `;` and `,`, blank node labels, blank
//! node property lists, collections, quoted and long string literals with
//! `^^datatype` or `@lang`, and integer/decimal/double/boolean shorthand.

use std::collections::HashSet;

use super::term::{Iri, Literal, RdfTerm, Triple};
use super::vocab::{rdf, xsd};
use super::{Graph, RdfError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    BNode(String),
    Str(String),
    LangTag(String),
    Carets,
    Integer(String),
    Decimal(String),
    Double(String),
    Word(String),
    AtPrefix,
    AtBase,
    Dot,
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::IriRef(v) => format!("<{v}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::BNode(l) => format!("_:{l}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LangTag(t) => format!("@{t}"),
            Tok::Carets => "^^".into(),
            Tok::Integer(n) | Tok::Decimal(n) | Tok::Double(n) => n.clone(),
            Tok::Word(w) => w.clone(),
            Tok::AtPrefix => "@prefix".into(),
            Tok::AtBase => "@base".into(),
            Tok::Dot => ".".into(),
            Tok::Semi => ";".into(),
            Tok::Comma => ",".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

fn syntax(line: usize, col: usize, token: impl Into<String>, message: impl Into<String>) -> RdfError {
    RdfError::Syntax { line, col, token: token.into(), message: message.into() }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%' | '\\') || (c as u32) > 0x7f
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, RdfError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Spanned { tok: Tok::Eof, line, col });
                return Ok(out);
            };
            let tok = match c {
                '<' => self.iri_ref()?,
                '"' | '\'' => self.string(c)?,
                '@' => self.at_word()?,
                '^' => {
                    self.bump();
                    if self.peek() != Some('^') {
                        return Err(syntax(line, col, "^", "expected '^^'"));
                    }
                    self.bump();
                    Tok::Carets
                }
                '.' if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.name_run();
                    if label.is_empty() {
                        return Err(syntax(line, col, "_:", "empty blank node label"));
                    }
                    Tok::BNode(label)
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(line, col)?,
                c if is_name_char(c) => {
                    let run = self.name_run();
                    match run.find(':') {
                        Some(i) => Tok::PName { prefix: run[..i].to_string(), local: unescape_local(&run[i + 1..]) },
                        None => Tok::Word(run),
                    }
                }
                other => return Err(syntax(line, col, other.to_string(), "unexpected character")),
            };
            out.push(Spanned { tok, line, col });
        }
    }

    /// Reads a run of name characters, giving back trailing dots.
    fn name_run(&mut self) -> String {
        let start = self.pos;
        let mut end = self.pos;
        while end < self.chars.len() && is_name_char(self.chars[end]) {
            if self.chars[end] == '\\' && end + 1 < self.chars.len() {
                end += 1;
            }
            end += 1;
        }
        while end > start && self.chars[end - 1] == '.' {
            end -= 1;
        }
        let run: String = self.chars[start..end].iter().collect();
        while self.pos < end {
            self.bump();
        }
        run
    }

    fn iri_ref(&mut self) -> Result<Tok, RdfError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(Tok::IriRef(value)),
                Some('\\') => {
                    let c = self.escape(line, col, false)?;
                    value.push(c);
                }
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(syntax(line, col, format!("<{value}"), "malformed IRI"));
                }
                Some(c) => value.push(c),
                None => return Err(syntax(line, col, format!("<{value}"), "unterminated IRI")),
            }
        }
    }

    fn escape(&mut self, line: usize, col: usize, string_escapes: bool) -> Result<char, RdfError> {
        let c = self.bump().ok_or_else(|| syntax(line, col, "\\", "dangling escape"))?;
        let hex = |lexer: &mut Self, n: usize| -> Result<char, RdfError> {
            let mut code = 0u32;
            for _ in 0..n {
                let d = lexer
                    .bump()
                    .and_then(|d| d.to_digit(16))
                    .ok_or_else(|| syntax(line, col, "\\u", "bad unicode escape"))?;
                code = code * 16 + d;
            }
            char::from_u32(code).ok_or_else(|| syntax(line, col, "\\u", "invalid code point"))
        };
        match c {
            'u' => hex(self, 4),
            'U' => hex(self, 8),
            't' if string_escapes => Ok('\t'),
            'b' if string_escapes => Ok('\u{8}'),
            'n' if string_escapes => Ok('\n'),
            'r' if string_escapes => Ok('\r'),
            'f' if string_escapes => Ok('\u{c}'),
            '"' | '\'' | '\\' if string_escapes => Ok(c),
            other => Err(syntax(line, col, format!("\\{other}"), "unsupported escape")),
        }
    }

    fn string(&mut self, quote: char) -> Result<Tok, RdfError> {
        let (line, col) = (self.line, self.col);
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let open = if long { 3 } else { 1 };
        for _ in 0..open {
            self.bump();
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Err(syntax(line, col, value, "unterminated string")),
                Some(c) if c == quote => {
                    if !long {
                        self.bump();
                        break;
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        self.bump();
                        self.bump();
                        self.bump();
                        // A long string may end with up to two extra quotes.
                        while self.peek() == Some(quote) {
                            value.push(quote);
                            self.bump();
                        }
                        break;
                    }
                    value.push(c);
                    self.bump();
                }
                Some('\\') => {
                    self.bump();
                    value.push(self.escape(line, col, true)?);
                }
                Some('\n') | Some('\r') if !long => {
                    return Err(syntax(line, col, value, "newline in short string"));
                }
                Some(c) => {
                    value.push(c);
                    self.bump();
                }
            }
        }
        Ok(Tok::Str(value))
    }

    fn at_word(&mut self) -> Result<Tok, RdfError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        match word.as_str() {
            "prefix" => Ok(Tok::AtPrefix),
            "base" => Ok(Tok::AtBase),
            "" => Err(syntax(line, col, "@", "expected directive or language tag")),
            _ => Ok(Tok::LangTag(word)),
        }
    }

    fn number(&mut self, line: usize, col: usize) -> Result<Tok, RdfError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        let mut digits_before = 0;
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            text.push(c);
            self.bump();
            digits_before += 1;
        }
        let mut kind = 0; // 0 integer, 1 decimal, 2 double
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            kind = 1;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                text.push(c);
                self.bump();
            }
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            kind = 2;
            text.push(e);
            self.bump();
            if let Some(s @ ('+' | '-')) = self.peek() {
                text.push(s);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                text.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return Err(syntax(line, col, text, "malformed exponent"));
            }
        }
        if digits_before == 0 && kind == 0 {
            return Err(syntax(line, col, text, "malformed number"));
        }
        Ok(match kind {
            0 => Tok::Integer(text),
            1 => Tok::Decimal(text),
            _ => Tok::Double(text),
        })
    }
}

fn unescape_local(local: &str) -> String {
    let mut out = String::with_capacity(local.len());
    let mut chars = local.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: Vec<(String, String)>,
    triples: Vec<Triple>,
    used_labels: HashSet<String>,
    fresh: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> RdfError {
        let s = &self.toks[self.pos];
        syntax(s.line, s.col, s.tok.describe(), message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), RdfError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn fresh_bnode(&mut self) -> RdfTerm {
        loop {
            let label = format!("b{}", self.fresh);
            self.fresh += 1;
            if !self.used_labels.contains(&label) {
                return RdfTerm::bnode(label);
            }
        }
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::AtPrefix => {
                    self.next();
                    self.prefix_decl()?;
                    self.expect(Tok::Dot, "'.' after @prefix")?;
                }
                Tok::AtBase => return Err(self.error_here("base declarations are not supported")),
                Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                    self.next();
                    self.prefix_decl()?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                    return Err(self.error_here("base declarations are not supported"));
                }
                _ => {
                    self.triples_stmt()?;
                    self.expect(Tok::Dot, "'.' at end of statement")?;
                }
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        let name = match self.next() {
            Spanned { tok: Tok::PName { prefix, local }, .. } if local.is_empty() => prefix,
            s => return Err(syntax(s.line, s.col, s.tok.describe(), "expected prefix name")),
        };
        let iri = match self.next() {
            Spanned { tok: Tok::IriRef(iri), line, col } => {
                if !Iri::is_absolute(&iri) {
                    return Err(RdfError::RelativeIri { iri, line, col });
                }
                iri
            }
            s => return Err(syntax(s.line, s.col, s.tok.describe(), "expected IRI")),
        };
        self.prefixes.retain(|(p, _)| p != &name);
        self.prefixes.push((name, iri));
        Ok(())
    }

    fn resolve(&self, prefix: &str, local: &str, line: usize, col: usize) -> Result<Iri, RdfError> {
        self.prefixes
            .iter()
            .rev()
            .find(|(p, _)| p == prefix)
            .map(|(_, ns)| Iri::new(format!("{ns}{local}")))
            .ok_or_else(|| RdfError::UndefinedPrefix { prefix: prefix.to_string(), line, col })
    }

    fn iri(&mut self) -> Result<Option<Iri>, RdfError> {
        let s = self.toks[self.pos].clone();
        match s.tok {
            Tok::IriRef(iri) => {
                self.next();
                if !Iri::is_absolute(&iri) {
                    return Err(RdfError::RelativeIri { iri, line: s.line, col: s.col });
                }
                Ok(Some(Iri::new(iri)))
            }
            Tok::PName { prefix, local } => {
                self.next();
                Ok(Some(self.resolve(&prefix, &local, s.line, s.col)?))
            }
            _ => Ok(None),
        }
    }

    fn triples_stmt(&mut self) -> Result<(), RdfError> {
        match self.peek() {
            Tok::LBracket => {
                let subject = self.blank_node_property_list()?;
                if !matches!(self.peek(), Tok::Dot) {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)
            }
        }
    }

    fn subject(&mut self) -> Result<RdfTerm, RdfError> {
        if let Some(iri) = self.iri()? {
            return Ok(RdfTerm::Iri(iri));
        }
        match self.peek().clone() {
            Tok::BNode(label) => {
                self.next();
                Ok(RdfTerm::bnode(label))
            }
            Tok::LParen => self.collection(),
            _ => Err(self.error_here("expected subject")),
        }
    }

    fn predicate(&mut self) -> Result<Iri, RdfError> {
        if let Tok::Word(w) = self.peek() {
            if w == "a" {
                self.next();
                return Ok(Iri::new(rdf::TYPE));
            }
        }
        self.iri()?.ok_or_else(|| self.error_here("expected predicate"))
    }

    fn predicate_object_list(&mut self, subject: &RdfTerm) -> Result<(), RdfError> {
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                self.triples.push(Triple { subject: subject.clone(), predicate: predicate.clone(), object });
                if matches!(self.peek(), Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
            if !matches!(self.peek(), Tok::Semi) {
                return Ok(());
            }
            while matches!(self.peek(), Tok::Semi) {
                self.next();
            }
            if matches!(self.peek(), Tok::Dot | Tok::RBracket | Tok::Eof) {
                return Ok(());
            }
        }
    }

    fn blank_node_property_list(&mut self) -> Result<RdfTerm, RdfError> {
        self.expect(Tok::LBracket, "'['")?;
        let node = self.fresh_bnode();
        if !matches!(self.peek(), Tok::RBracket) {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<RdfTerm, RdfError> {
        self.expect(Tok::LParen, "'('")?;
        let mut items = Vec::new();
        while !matches!(self.peek(), Tok::RParen) {
            if matches!(self.peek(), Tok::Eof) {
                return Err(self.error_here("unterminated collection"));
            }
            items.push(self.object()?);
        }
        self.next();
        if items.is_empty() {
            return Ok(RdfTerm::iri(rdf::NIL));
        }
        let cells: Vec<RdfTerm> = items.iter().map(|_| self.fresh_bnode()).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.triples.push(Triple { subject: cells[i].clone(), predicate: Iri::new(rdf::FIRST), object: item });
            let rest = cells.get(i + 1).cloned().unwrap_or_else(|| RdfTerm::iri(rdf::NIL));
            self.triples.push(Triple { subject: cells[i].clone(), predicate: Iri::new(rdf::REST), object: rest });
        }
        Ok(cells[0].clone())
    }

    fn object(&mut self) -> Result<RdfTerm, RdfError> {
        if let Some(iri) = self.iri()? {
            return Ok(RdfTerm::Iri(iri));
        }
        match self.peek().clone() {
            Tok::BNode(label) => {
                self.next();
                Ok(RdfTerm::bnode(label))
            }
            Tok::LBracket => self.blank_node_property_list(),
            Tok::LParen => self.collection(),
            Tok::Str(value) => {
                self.next();
                match self.peek().clone() {
                    Tok::LangTag(tag) => {
                        self.next();
                        Ok(RdfTerm::Literal(Literal::lang(value, tag)))
                    }
                    Tok::Carets => {
                        self.next();
                        let dt = self.iri()?.ok_or_else(|| self.error_here("expected datatype IRI"))?;
                        Ok(RdfTerm::Literal(Literal::typed(value, dt)))
                    }
                    _ => Ok(RdfTerm::string(value)),
                }
            }
            Tok::Integer(n) => {
                self.next();
                Ok(RdfTerm::typed(n, xsd::INTEGER))
            }
            Tok::Decimal(n) => {
                self.next();
                Ok(RdfTerm::typed(n, xsd::DECIMAL))
            }
            Tok::Double(n) => {
                self.next();
                Ok(RdfTerm::typed(n, xsd::DOUBLE))
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.next();
                Ok(RdfTerm::typed(w, xsd::BOOLEAN))
            }
            _ => Err(self.error_here("expected object")),
        }
    }
}

/// Parses a Turtle document into a [`Graph`].
///
/// Explicit blank node labels are kept; anonymous nodes are labelled
/// `b<counter>` in document order, skipping labels the document already uses.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let toks = Lexer::new(text).tokenize()?;
    let used_labels = toks
        .iter()
        .filter_map(|s| match &s.tok {
            Tok::BNode(l) => Some(l.clone()),
            _ => None,
        })
        .collect();
    let mut parser = Parser { toks, pos: 0, prefixes: Vec::new(), triples: Vec::new(), used_labels, fresh: 0 };
    parser.document()?;
    Ok(Graph::new(parser.triples, parser.prefixes))
}
