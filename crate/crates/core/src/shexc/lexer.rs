use super::ShexError;

#[derive(Clone, Debug, PartialEq)]
pub(super) enum Tok {
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
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Pipe,
    Question,
    Star,
    Plus,
    Dot,
    Bang,
    Caret,
    Amp,
    At,
    SemAct(String),
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::IriRef(v) => format!("<{v}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::BNode(l) => format!("_:{l}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LangTag(t) => format!("@{t}"),
            Tok::Carets => "^^".into(),
            Tok::Integer(n) | Tok::Decimal(n) | Tok::Double(n) | Tok::Word(n) => n.clone(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::Comma => ",".into(),
            Tok::Semi => ";".into(),
            Tok::Pipe => "|".into(),
            Tok::Question => "?".into(),
            Tok::Star => "*".into(),
            Tok::Plus => "+".into(),
            Tok::Dot => ".".into(),
            Tok::Bang => "!".into(),
            Tok::Caret => "^".into(),
            Tok::Amp => "&".into(),
            Tok::At => "@".into(),
            Tok::SemAct(s) => format!("%{s}"),
            Tok::Eof => "end of input".into(),
        }
    }

    pub(super) fn is_word(&self, w: &str) -> bool {
        matches!(self, Tok::Word(x) if x == w)
    }
}

#[derive(Clone, Debug)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':') || (c as u32) > 0x7f
}

pub(super) fn tokenize(src: &str) -> Result<Vec<Spanned>, ShexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut lx = Lexer { chars, pos: 0, line: 1, col: 1 };
    let mut out: Vec<Spanned> = Vec::new();
    loop {
        lx.skip_trivia();
        let (line, col) = (lx.line, lx.col);
        let err = |token: String, message: &str| ShexError::Syntax { line, col, token, message: message.to_string() };
        let Some(c) = lx.peek() else {
            out.push(Spanned { tok: Tok::Eof, line, col });
            return Ok(out);
        };
        let after_string = matches!(out.last(), Some(Spanned { tok: Tok::Str(_), .. }));
        let tok = match c {
            '<' => {
                lx.bump();
                let mut v = String::new();
                loop {
                    match lx.bump() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() => return Err(err(v, "malformed IRI")),
                        Some(c) => v.push(c),
                        None => return Err(err(v, "unterminated IRI")),
                    }
                }
                Tok::IriRef(v)
            }
            '"' | '\'' => {
                lx.bump();
                let mut v = String::new();
                loop {
                    match lx.bump() {
                        Some(q) if q == c => break,
                        Some('\\') => match lx.bump() {
                            Some('n') => v.push('\n'),
                            Some('t') => v.push('\t'),
                            Some('r') => v.push('\r'),
                            Some(e @ ('"' | '\'' | '\\')) => v.push(e),
                            Some('u') => {
                                let hex: String = (0..4).filter_map(|_| lx.bump()).collect();
                                let ch = u32::from_str_radix(&hex, 16)
                                    .ok()
                                    .and_then(char::from_u32)
                                    .ok_or_else(|| err(hex.clone(), "bad unicode escape"))?;
                                v.push(ch);
                            }
                            other => return Err(err(format!("\\{}", other.unwrap_or(' ')), "unsupported escape")),
                        },
                        Some('\n') | None => return Err(err(v, "unterminated string")),
                        Some(ch) => v.push(ch),
                    }
                }
                Tok::Str(v)
            }
            '@' if after_string && lx.peek_at(1).is_some_and(|c| c.is_ascii_alphabetic()) => {
                lx.bump();
                let mut tag = String::new();
                while let Some(c) = lx.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '-') {
                    tag.push(c);
                    lx.bump();
                }
                Tok::LangTag(tag)
            }
            '^' => {
                lx.bump();
                if lx.peek() == Some('^') {
                    lx.bump();
                    Tok::Carets
                } else {
                    Tok::Caret
                }
            }
            '%' => {
                lx.bump();
                let mut text = String::new();
                loop {
                    match lx.bump() {
                        Some('%') => break,
                        Some('{') => {
                            text.push('{');
                            loop {
                                match lx.bump() {
                                    Some('%') if lx.peek() == Some('}') => {
                                        lx.bump();
                                        text.push_str("%}");
                                        break;
                                    }
                                    Some(ch) => text.push(ch),
                                    None => return Err(err(text, "unterminated semantic action")),
                                }
                            }
                            break;
                        }
                        Some(ch) => text.push(ch),
                        None => return Err(err(text, "unterminated semantic action")),
                    }
                }
                Tok::SemAct(text)
            }
            '_' if lx.peek_at(1) == Some(':') => {
                lx.bump();
                lx.bump();
                let label = lx.name_run();
                if label.is_empty() {
                    return Err(err("_:".into(), "empty blank node label"));
                }
                Tok::BNode(label)
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+') && lx.peek_at(1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                lx.number()
            }
            c if is_name_char(c) && c != '.' && c != '-' => {
                let run = lx.name_run();
                match run.find(':') {
                    Some(i) => Tok::PName { prefix: run[..i].to_string(), local: run[i + 1..].to_string() },
                    None => Tok::Word(run),
                }
            }
            _ => {
                lx.bump();
                match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '|' => Tok::Pipe,
                    '?' => Tok::Question,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '.' => Tok::Dot,
                    '!' => Tok::Bang,
                    '&' => Tok::Amp,
                    '@' => Tok::At,
                    other => return Err(err(other.to_string(), "unexpected character")),
                }
            }
        };
        out.push(Spanned { tok, line, col });
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
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

    fn name_run(&mut self) -> String {
        let start = self.pos;
        let mut end = start;
        while end < self.chars.len() && is_name_char(self.chars[end]) {
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

    fn number(&mut self) -> Tok {
        let mut text = String::new();
        if let Some(s @ ('+' | '-')) = self.peek() {
            text.push(s);
            self.bump();
        }
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            text.push(c);
            self.bump();
        }
        let mut kind = 0;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            kind = 1;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E'))
            && (self.peek_at(1).is_some_and(|c| c.is_ascii_digit())
                || (matches!(self.peek_at(1), Some('+' | '-')) && self.peek_at(2).is_some_and(|c| c.is_ascii_digit())))
        {
            kind = 2;
            text.push(self.bump().unwrap());
            if let Some(s @ ('+' | '-')) = self.peek() {
                text.push(s);
                self.bump();
            }
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                text.push(c);
                self.bump();
            }
        }
        match kind {
            0 => Tok::Integer(text),
            1 => Tok::Decimal(text),
            _ => Tok::Double(text),
        }
    }
}
