//! Datalog-style surface syntax shared by queries, constraints, and facts.
//!
//! ```text
//! rule  := head ":-" body "." | ":-" body "."
//! head  := ident "(" [varlist] ")"
//! body  := atom ("," atom)*
//! atom  := ident "(" term ("," term)* ")"
//! term  := VARIABLE | CONSTANT | quoted-string
//! ```
//!
//! Variables start with an uppercase letter, constants with a lowercase
//! letter or a digit, or are double-quoted. `%` starts a comment.

use crate::error::{Error, Result};
use crate::relational::{Constant, GroundAtom, Schema};

use super::{ConjunctiveQuery, DenialConstraint, QueryAtom, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Word(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    LBracket,
    RBracket,
    At,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Neck => "`:-`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::At => "`@`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push(Token {
                    kind: TokenKind::Eof,
                    line,
                    column,
                });
                return Ok(out);
            };
            let kind = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '%' => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                    continue;
                }
                '(' | ')' | ',' | '.' | '[' | ']' | '@' => {
                    self.bump();
                    match c {
                        '(' => TokenKind::LParen,
                        ')' => TokenKind::RParen,
                        ',' => TokenKind::Comma,
                        '.' => TokenKind::Dot,
                        '[' => TokenKind::LBracket,
                        ']' => TokenKind::RBracket,
                        _ => TokenKind::At,
                    }
                }
                ':' => {
                    self.bump();
                    if self.chars.peek() != Some(&'-') {
                        return Err(Error::syntax(line, column, "expected `:-`"));
                    }
                    self.bump();
                    TokenKind::Neck
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None | Some('\n') => return Err(Error::syntax(line, column, "unterminated string")),
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some(e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(Error::syntax(self.line, self.column, "invalid escape in string")),
                            },
                            Some(c) => s.push(c),
                        }
                    }
                    if s.is_empty() {
                        return Err(Error::syntax(line, column, "empty constant"));
                    }
                    TokenKind::Str(s)
                }
                '=' | '!' | '<' | '>' => {
                    return Err(Error::syntax(line, column, "built-in comparisons are not supported"))
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut w = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            w.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    TokenKind::Word(w)
                }
                other => return Err(Error::syntax(line, column, format!("unexpected character `{other}`"))),
            };
            out.push(Token { kind, line, column });
        }
    }
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: Lexer::new(text).tokenize()?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    pub fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        Error::syntax(t.line, t.column, message)
    }

    pub fn expect(&mut self, kind: TokenKind) -> Result<Token> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                kind.describe(),
                self.peek().kind.describe()
            )))
        }
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn word(&mut self, what: &str) -> Result<String> {
        match self.peek().kind.clone() {
            TokenKind::Word(w) => {
                self.next();
                Ok(w)
            }
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let t = self.next();
        match t.kind {
            TokenKind::Str(s) => Ok(Term::Constant(Constant::new(s))),
            TokenKind::Word(w) => {
                let first = w.chars().next().unwrap_or('_');
                if first.is_ascii_uppercase() {
                    Ok(Term::Variable(w))
                } else if first.is_ascii_lowercase() || first.is_ascii_digit() {
                    Ok(Term::Constant(Constant::new(w)))
                } else {
                    Err(Error::syntax(
                        t.line,
                        t.column,
                        format!("`{w}` is neither a variable nor a constant"),
                    ))
                }
            }
            other => Err(Error::syntax(
                t.line,
                t.column,
                format!("expected a term, found {}", other.describe()),
            )),
        }
    }

    fn atom(&mut self) -> Result<QueryAtom> {
        let name = self.word("a predicate name")?;
        self.expect(TokenKind::LParen)?;
        let mut args = vec![self.term()?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.term()?);
        }
        self.expect(TokenKind::RParen)?;
        Ok(QueryAtom::new(&name, args))
    }

    fn body(&mut self) -> Result<Vec<QueryAtom>> {
        let mut atoms = vec![self.atom()?];
        while self.eat(&TokenKind::Comma) {
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    fn head(&mut self) -> Result<Vec<String>> {
        self.word("a query name")?;
        self.expect(TokenKind::LParen)?;
        let mut vars = Vec::new();
        if self.eat(&TokenKind::RParen) {
            return Ok(vars);
        }
        loop {
            let t = self.peek().clone();
            match self.term()? {
                Term::Variable(v) => vars.push(v),
                Term::Constant(_) => return Err(Error::syntax(t.line, t.column, "head arguments must be variables")),
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(vars)
    }

    /// A ground argument list `(c1, ..., cn)` after the predicate name.
    pub fn ground_args(&mut self) -> Result<Vec<Constant>> {
        self.expect(TokenKind::LParen)?;
        let mut args = Vec::new();
        loop {
            let t = self.peek().clone();
            match self.term()? {
                Term::Constant(c) => args.push(c),
                Term::Variable(v) => {
                    return Err(Error::syntax(
                        t.line,
                        t.column,
                        format!("variable `{v}` is not allowed in a ground atom"),
                    ))
                }
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(args)
    }

    fn finish(&mut self) -> Result<()> {
        self.expect(TokenKind::Eof).map(|_| ())
    }
}

fn located(atom_err: Error, at: &Token) -> Error {
    match atom_err {
        Error::Syntax { message, .. } => Error::syntax(at.line, at.column, message),
        other => other,
    }
}

/// Parses `q(X1,..,Xk) :- body.` (or a headless `:- body.`, read as a boolean query).
pub fn parse_query(text: &str) -> Result<ConjunctiveQuery> {
    let mut p = Parser::new(text)?;
    let start = p.peek().clone();
    let free = if p.peek().kind == TokenKind::Neck {
        Vec::new()
    } else {
        p.head()?
    };
    p.expect(TokenKind::Neck)?;
    let atoms = p.body()?;
    p.expect(TokenKind::Dot)?;
    p.finish()?;
    ConjunctiveQuery::new(free, atoms).map_err(|e| located(e, &start))
}

/// Parses a query and checks every predicate against `schema`.
pub fn parse_query_with_schema(text: &str, schema: &Schema) -> Result<ConjunctiveQuery> {
    let q = parse_query(text)?;
    for a in q.atoms() {
        match schema.arity(a.name()) {
            None => return Err(Error::UnknownPredicate(a.name().to_string())),
            Some(arity) if arity != a.args().len() => {
                return Err(Error::ArityMismatch {
                    predicate: a.name().to_string(),
                    expected: arity,
                    found: a.args().len(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(q)
}

fn dc_rule(p: &mut Parser) -> Result<DenialConstraint> {
    let start = p.peek().clone();
    if start.kind != TokenKind::Neck {
        return Err(p.error_here("a denial constraint starts with `:-`"));
    }
    p.next();
    let atoms = p.body()?;
    p.expect(TokenKind::Dot)?;
    DenialConstraint::new(atoms).map_err(|e| located(e, &start))
}

/// Parses a headless rule `:- A1, ..., An.`
pub fn parse_dc(text: &str) -> Result<DenialConstraint> {
    let mut p = Parser::new(text)?;
    let dc = dc_rule(&mut p)?;
    p.finish()?;
    Ok(dc)
}

/// Parses zero or more denial constraints.
pub fn parse_dcs(text: &str) -> Result<Vec<DenialConstraint>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek().kind != TokenKind::Eof {
        out.push(dc_rule(&mut p)?);
    }
    Ok(out)
}

/// Parses `P(c1,...,cn)`, with an optional trailing dot.
pub fn parse_ground_atom(text: &str) -> Result<GroundAtom> {
    let mut p = Parser::new(text)?;
    let name = p.word("a predicate name")?;
    let args = p.ground_args()?;
    p.eat(&TokenKind::Dot);
    p.finish()?;
    Ok(GroundAtom::new(&name, args))
}
