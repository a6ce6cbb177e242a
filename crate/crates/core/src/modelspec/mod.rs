//! Text model files and the built-in cascade benchmark.
//!
//! A model file has four sections, each optional except `spaces:`:
//!
//! ```text
//! spaces:
//!   xi = 3            # declaration order fixes the Kronecker order
//!   a = 5
//! define:
//!   s12 = trans(xi,1,2)
//!   a = a(a)          # bindings and spaces live in separate namespaces
//! hamiltonian:
//!   a'*s12 + a*s12'   # one term per line, summed
//! dissipators:
//!   3, a              # rate, jump
//! ```
//!
//! Primitives are `ident(s)`, `trans(s,j,k)` = `|j><k|`, `proj(s,j)` = `|j><j|`
//! (levels from 1) and `a(s)`, the lowering operator on Fock states
//! `|0>..|d-1>`. A number in operator position stands for that multiple of
//! the identity.

mod ast;
mod build;
mod cascade;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{Binding, DissipatorDecl, ExprKind, ModelDocument, OperatorExpr, Primitive, SpaceDecl, Span};
pub use build::{build_model, build_model_with_context, ModelContext};
pub use cascade::{cascade_document, cascade_layout, cascade_model, render_cascade, CascadeOperators, CascadeParams};
pub use parser::{parse_expr, parse_model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Semantic,
}

impl ParseErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorKind::Lexical => "lexical",
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Semantic => "semantic",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A positioned model-file diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error at {}:{}: {}", self.kind, self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}
