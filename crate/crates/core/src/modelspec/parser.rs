//! Recursive-descent parser for model files and operator expressions.
//!
//! ```text
//! expr   = ["+" | "-"] term (("+" | "-") term)*
//! term   = factor ("*" factor)*
//! factor = atom "'"*
//! atom   = number | number "i" | ident | ident "(" args ")"
//!        | "(" expr ")" | "(" signed-number "," signed-number ")"
//! ```

use std::collections::{BTreeMap, BTreeSet};

use faer::c64;

use super::ast::{Binding, DissipatorDecl, ExprKind, ModelDocument, OperatorExpr, Primitive, SpaceDecl, Span};
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind};

const SECTIONS: [&str; 4] = ["spaces", "define", "hamiltonian", "dissipators"];

pub(crate) fn syntax(span: Span, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line: span.line,
        col: span.col,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

pub(crate) fn semantic(span: Span, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Semantic,
        line: span.line,
        col: span.col,
        message: message.into(),
        expected: vec![],
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.toks[(self.pos + offset).min(self.toks.len() - 1)].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        syntax(t.span, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn expect_line_end(&mut self) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::Newline => {
                self.advance();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected(&["end of line"])),
        }
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.advance();
        }
    }

    fn at_section_header(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let span = self.peek().span;
        let mut lhs = match self.peek().tok {
            Tok::Plus => {
                self.advance();
                self.term()?
            }
            Tok::Minus => {
                self.advance();
                OperatorExpr::new(ExprKind::Neg(Box::new(self.term()?)), span)
            }
            _ => self.term()?,
        };
        loop {
            let kind: fn(Box<OperatorExpr>, Box<OperatorExpr>) -> ExprKind = match self.peek().tok {
                Tok::Plus => ExprKind::Sum,
                Tok::Minus => ExprKind::Difference,
                _ => break,
            };
            self.advance();
            let rhs = self.term()?;
            lhs = OperatorExpr::new(kind(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<OperatorExpr, ParseError> {
        let span = self.peek().span;
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.advance();
            let rhs = self.factor()?;
            let kind = match lhs.kind {
                ExprKind::Literal(c) => ExprKind::ScalarMul(c, Box::new(rhs)),
                _ => ExprKind::Product(Box::new(lhs), Box::new(rhs)),
            };
            lhs = OperatorExpr::new(kind, span);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut e = self.atom()?;
        while self.peek().tok == Tok::Prime {
            self.advance();
            e = e.adjoint();
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<OperatorExpr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(v, _) => {
                self.advance();
                Ok(OperatorExpr::new(ExprKind::Literal(c64::new(v, 0.0)), t.span))
            }
            Tok::Imag(v) => {
                self.advance();
                Ok(OperatorExpr::new(ExprKind::Literal(c64::new(0.0, v)), t.span))
            }
            Tok::Ident(name) => {
                self.advance();
                if self.peek().tok == Tok::LParen {
                    self.primitive(name, t.span)
                } else {
                    Ok(OperatorExpr::new(ExprKind::Ident(name), t.span))
                }
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                if self.peek().tok == Tok::Comma {
                    let re = signed_real(&inner).ok_or_else(|| {
                        syntax(inner.span, "complex pair needs a real number before `,`", &["number"])
                    })?;
                    self.advance();
                    let im = self.signed_number()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(OperatorExpr::new(ExprKind::Literal(c64::new(re, im)), t.span));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`"])),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let sign = match self.peek().tok {
            Tok::Minus => {
                self.advance();
                -1.0
            }
            Tok::Plus => {
                self.advance();
                1.0
            }
            _ => 1.0,
        };
        match self.peek().tok {
            Tok::Number(v, _) => {
                self.advance();
                Ok(sign * v)
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn primitive(&mut self, name: String, span: Span) -> Result<OperatorExpr, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let space = match self.advance() {
            Token { tok: Tok::Ident(s), .. } => s,
            other => {
                return Err(syntax(other.span, format!("unexpected {}", other.tok.describe()), &["space name"]));
            }
        };
        let mut levels = Vec::new();
        while self.peek().tok == Tok::Comma {
            self.advance();
            let t = self.advance();
            match t.tok {
                Tok::Number(_, ref text) if text.chars().all(|c| c.is_ascii_digit()) => {
                    let v =
                        text.parse::<usize>().map_err(|_| semantic(t.span, format!("index `{text}` is too large")))?;
                    levels.push(v);
                }
                other => return Err(syntax(t.span, format!("unexpected {}", other.describe()), &["integer index"])),
            }
        }
        let close = self.peek().span;
        self.expect(Tok::RParen, "`)`")?;
        let arity = |n: usize| -> Result<(), ParseError> {
            if levels.len() + 1 != n {
                return Err(syntax(close, format!("`{name}` takes {n} argument(s), got {}", levels.len() + 1), &[]));
            }
            Ok(())
        };
        let p = match name.as_str() {
            "ident" => {
                arity(1)?;
                Primitive::Identity { space }
            }
            "a" => {
                arity(1)?;
                Primitive::Annihilation { space }
            }
            "proj" => {
                arity(2)?;
                Primitive::Projector { space, j: levels[0] }
            }
            "trans" => {
                arity(3)?;
                Primitive::Transition { space, j: levels[0], k: levels[1] }
            }
            _ => return Err(semantic(span, format!("unknown primitive `{name}`; expected ident, trans, proj or a"))),
        };
        Ok(OperatorExpr::new(ExprKind::Primitive(p), span))
    }

    fn document(&mut self) -> Result<ModelDocument, ParseError> {
        let mut doc = ModelDocument::default();
        let mut seen = BTreeSet::new();
        loop {
            self.skip_newlines();
            let head = self.peek().clone();
            let section = match (&head.tok, self.peek_at(1)) {
                (Tok::Eof, _) => break,
                (Tok::Ident(name), Tok::Colon) if SECTIONS.contains(&name.as_str()) => name.clone(),
                (Tok::Ident(name), Tok::Colon) => {
                    return Err(syntax(head.span, format!("unknown section `{name}`"), &SECTIONS));
                }
                _ => {
                    return Err(syntax(
                        head.span,
                        "expected a section header",
                        &["spaces:", "define:", "hamiltonian:", "dissipators:"],
                    ))
                }
            };
            if !seen.insert(section.clone()) {
                return Err(syntax(head.span, format!("section `{section}` appears twice"), &[]));
            }
            self.advance();
            self.advance();
            self.expect_line_end()?;
            loop {
                self.skip_newlines();
                if self.peek().tok == Tok::Eof || self.at_section_header() {
                    break;
                }
                let span = self.peek().span;
                match section.as_str() {
                    "spaces" => {
                        let name = self.ident()?;
                        self.expect(Tok::Equals, "`=`")?;
                        let t = self.advance();
                        let dim = match &t.tok {
                            Tok::Number(_, text) if text.chars().all(|c| c.is_ascii_digit()) => {
                                text.parse::<usize>().ok().filter(|&d| d >= 1).ok_or_else(|| {
                                    semantic(t.span, format!("dimension of `{name}` must be a positive integer"))
                                })?
                            }
                            Tok::Number(_, text) => {
                                return Err(semantic(
                                    t.span,
                                    format!("dimension `{text}` of `{name}` is not an integer"),
                                ))
                            }
                            other => {
                                return Err(syntax(
                                    t.span,
                                    format!("unexpected {}", other.describe()),
                                    &["integer dimension"],
                                ))
                            }
                        };
                        doc.spaces.push(SpaceDecl { name, dim, span });
                    }
                    "define" => {
                        let name = self.ident()?;
                        self.expect(Tok::Equals, "`=`")?;
                        let expr = self.expr()?;
                        doc.bindings.push(Binding { name, expr, span });
                    }
                    "hamiltonian" => doc.hamiltonian.push(self.expr()?),
                    _ => {
                        let rate = self.expr()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let jump = self.expr()?;
                        doc.dissipators.push(DissipatorDecl { rate, rate_value: f64::NAN, jump, span });
                    }
                }
                self.expect_line_end()?;
            }
        }
        Ok(doc)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }
}

fn signed_real(e: &OperatorExpr) -> Option<f64> {
    match &e.kind {
        ExprKind::Literal(c) if c.im == 0.0 => Some(c.re),
        ExprKind::Neg(inner) => match inner.kind {
            ExprKind::Literal(c) if c.im == 0.0 => Some(-c.re),
            _ => None,
        },
        _ => None,
    }
}

/// Parses a single expression. Only syntax is checked.
pub fn parse_expr(text: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser::new(text)?;
    p.skip_newlines();
    let e = p.expr()?;
    p.skip_newlines();
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

/// Parses a model file and checks names, index ranges and rates.
pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let mut doc = Parser::new(text)?.document()?;
    resolve(&mut doc)?;
    Ok(doc)
}

/// What an expression evaluates to, as far as name checking needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Kind {
    Scalar(c64),
    Operator,
}

pub(crate) struct Scope<'a> {
    pub spaces: BTreeMap<&'a str, usize>,
    pub names: BTreeMap<String, Kind>,
}

impl Scope<'_> {
    pub(crate) fn check(&self, e: &OperatorExpr) -> Result<Kind, ParseError> {
        use Kind::*;
        Ok(match &e.kind {
            ExprKind::Literal(c) => Scalar(*c),
            ExprKind::Ident(name) => {
                *self.names.get(name).ok_or_else(|| semantic(e.span, format!("unknown identifier `{name}`")))?
            }
            ExprKind::Primitive(p) => {
                check_primitive(&self.spaces, p, e.span)?;
                Operator
            }
            ExprKind::Sum(a, b) => match (self.check(a)?, self.check(b)?) {
                (Scalar(x), Scalar(y)) => Scalar(x + y),
                _ => Operator,
            },
            ExprKind::Difference(a, b) => match (self.check(a)?, self.check(b)?) {
                (Scalar(x), Scalar(y)) => Scalar(x - y),
                _ => Operator,
            },
            ExprKind::Product(a, b) => match (self.check(a)?, self.check(b)?) {
                (Scalar(x), Scalar(y)) => Scalar(x * y),
                _ => Operator,
            },
            ExprKind::ScalarMul(c, x) => match self.check(x)? {
                Scalar(y) => Scalar(c * y),
                Operator => Operator,
            },
            ExprKind::Neg(x) => match self.check(x)? {
                Scalar(y) => Scalar(-y),
                Operator => Operator,
            },
            ExprKind::Adjoint(x) => match self.check(x)? {
                Scalar(y) => Scalar(y.conj()),
                Operator => Operator,
            },
        })
    }
}

pub(crate) fn check_primitive(spaces: &BTreeMap<&str, usize>, p: &Primitive, span: Span) -> Result<usize, ParseError> {
    let dim = *spaces.get(p.space()).ok_or_else(|| semantic(span, format!("unknown space `{}`", p.space())))?;
    let levels: Vec<usize> = match p {
        Primitive::Transition { j, k, .. } => vec![*j, *k],
        Primitive::Projector { j, .. } => vec![*j],
        _ => vec![],
    };
    for l in levels {
        if l == 0 || l > dim {
            return Err(semantic(span, format!("level {l} out of range 1..={dim} for space `{}` in `{p}`", p.space())));
        }
    }
    Ok(dim)
}

fn resolve(doc: &mut ModelDocument) -> Result<(), ParseError> {
    if doc.spaces.is_empty() {
        return Err(semantic(Span::new(1, 1), "model declares no spaces"));
    }
    let mut spaces = BTreeMap::new();
    for s in &doc.spaces {
        if spaces.insert(s.name.as_str(), s.dim).is_some() {
            return Err(semantic(s.span, format!("space `{}` declared twice", s.name)));
        }
    }
    let mut scope = Scope { spaces, names: BTreeMap::new() };
    for b in &doc.bindings {
        if scope.names.contains_key(&b.name) {
            return Err(semantic(b.span, format!("`{}` defined twice", b.name)));
        }
        let kind = scope.check(&b.expr)?;
        scope.names.insert(b.name.clone(), kind);
    }
    for h in &doc.hamiltonian {
        scope.check(h)?;
    }
    for d in &mut doc.dissipators {
        d.rate_value = match scope.check(&d.rate)? {
            Kind::Scalar(c) if c.im.abs() <= 1e-14 * c.re.abs() && c.re > 0.0 && c.re.is_finite() => c.re,
            Kind::Scalar(c) => {
                return Err(semantic(d.rate.span, format!("rate must be a positive real number, got {}", fmt_c(c))));
            }
            Kind::Operator => return Err(semantic(d.rate.span, "rate must be a number, not an operator")),
        };
        scope.check(&d.jump)?;
    }
    Ok(())
}

fn fmt_c(c: c64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({},{})", c.re, c.im)
    }
}
