use super::ast::Span;
use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Real number, with the literal text kept for integer checks.
    Number(f64, String),
    /// Number with an `i` suffix.
    Imag(f64),
    Plus,
    Minus,
    Star,
    Prime,
    LParen,
    RParen,
    Comma,
    Equals,
    Colon,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(_, s) => format!("number `{s}`"),
            Tok::Imag(v) => format!("imaginary number `{v}i`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Prime => "`'`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn lexical(span: Span, message: String) -> ParseError {
    ParseError { kind: ParseErrorKind::Lexical, line: span.line, col: span.col, message, expected: vec![] }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '\'' => Some(Tok::Prime),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span });
            i += 1;
            col += 1;
            continue;
        }
        match c {
            '\n' => {
                out.push(Token { tok: Tok::Newline, span });
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Ident(word), span });
            }
            c if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                let digits = |i: &mut usize| {
                    let s = *i;
                    while *i < chars.len() && chars[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    *i > s
                };
                digits(&mut i);
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    digits(&mut i);
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    if !digits(&mut i) {
                        let text: String = chars[start..i].iter().collect();
                        return Err(lexical(span, format!("malformed number `{text}`: exponent has no digits")));
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| lexical(span, format!("malformed number `{text}`")))?;
                let imaginary = i < chars.len() && chars[i] == 'i';
                if imaginary {
                    i += 1;
                }
                if i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    let mut end = i;
                    while end < chars.len()
                        && (chars[end].is_ascii_alphanumeric() || chars[end] == '_' || chars[end] == '.')
                    {
                        end += 1;
                    }
                    let bad: String = chars[start..end].iter().collect();
                    return Err(lexical(span, format!("malformed number `{bad}`")));
                }
                col += i - start;
                let tok = if imaginary { Tok::Imag(value) } else { Tok::Number(value, text) };
                out.push(Token { tok, span });
            }
            other => {
                return Err(lexical(span, format!("unexpected character `{other}`")));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col) });
    Ok(out)
}
