use std::fmt;

use faer::c64;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Built-in operator constructors. Transition and projector levels are
/// 1-based; `a(s)` acts on Fock states `|0>..|d-1>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Primitive {
    Identity { space: String },
    Transition { space: String, j: usize, k: usize },
    Projector { space: String, j: usize },
    Annihilation { space: String },
}

impl Primitive {
    pub fn space(&self) -> &str {
        match self {
            Primitive::Identity { space }
            | Primitive::Transition { space, .. }
            | Primitive::Projector { space, .. }
            | Primitive::Annihilation { space } => space,
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Identity { space } => write!(f, "ident({space})"),
            Primitive::Transition { space, j, k } => write!(f, "trans({space},{j},{k})"),
            Primitive::Projector { space, j } => write!(f, "proj({space},{j})"),
            Primitive::Annihilation { space } => write!(f, "a({space})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Literal(c64),
    Ident(String),
    Primitive(Primitive),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Difference(Box<OperatorExpr>, Box<OperatorExpr>),
    Product(Box<OperatorExpr>, Box<OperatorExpr>),
    ScalarMul(c64, Box<OperatorExpr>),
    Neg(Box<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
}

/// Expression node. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct OperatorExpr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for OperatorExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl OperatorExpr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        OperatorExpr { kind, span }
    }

    fn unspanned(kind: ExprKind) -> Self {
        OperatorExpr { kind, span: Span::default() }
    }

    pub fn literal(c: c64) -> Self {
        Self::unspanned(ExprKind::Literal(c))
    }

    pub fn real(x: f64) -> Self {
        Self::literal(c64::new(x, 0.0))
    }

    pub fn ident(name: &str) -> Self {
        Self::unspanned(ExprKind::Ident(name.to_string()))
    }

    pub fn primitive(p: Primitive) -> Self {
        Self::unspanned(ExprKind::Primitive(p))
    }

    pub fn sum(self, rhs: OperatorExpr) -> Self {
        Self::unspanned(ExprKind::Sum(Box::new(self), Box::new(rhs)))
    }

    pub fn difference(self, rhs: OperatorExpr) -> Self {
        Self::unspanned(ExprKind::Difference(Box::new(self), Box::new(rhs)))
    }

    pub fn product(self, rhs: OperatorExpr) -> Self {
        Self::unspanned(ExprKind::Product(Box::new(self), Box::new(rhs)))
    }

    pub fn scaled(self, c: c64) -> Self {
        Self::unspanned(ExprKind::ScalarMul(c, Box::new(self)))
    }

    pub fn neg(self) -> Self {
        Self::unspanned(ExprKind::Neg(Box::new(self)))
    }

    /// Adjoint; an adjoint of an adjoint collapses to the operand.
    pub fn adjoint(self) -> Self {
        let span = self.span;
        match self.kind {
            ExprKind::Adjoint(inner) => *inner,
            kind => OperatorExpr { kind: ExprKind::Adjoint(Box::new(OperatorExpr { kind, span })), span },
        }
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Sum(..) | ExprKind::Difference(..) | ExprKind::Neg(_) => 1,
            ExprKind::Product(..) | ExprKind::ScalarMul(..) => 2,
            ExprKind::Adjoint(_) => 3,
            ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::Primitive(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let wrap = self.precedence() < min_prec;
        if wrap {
            f.write_str("(")?;
        }
        match &self.kind {
            ExprKind::Literal(c) => write_literal(f, *c)?,
            ExprKind::Ident(name) => f.write_str(name)?,
            ExprKind::Primitive(p) => write!(f, "{p}")?,
            ExprKind::Sum(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)?;
            }
            ExprKind::Difference(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" - ")?;
                b.write_at(f, 2)?;
            }
            ExprKind::Product(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)?;
            }
            ExprKind::ScalarMul(c, x) => {
                write_literal(f, *c)?;
                f.write_str("*")?;
                x.write_at(f, 3)?;
            }
            ExprKind::Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 2)?;
            }
            ExprKind::Adjoint(x) => {
                x.write_at(f, 4)?;
                f.write_str("'")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Writes a literal in a form the parser reads back as a single atom.
fn write_literal(f: &mut fmt::Formatter<'_>, c: c64) -> fmt::Result {
    let plain_zero = |x: f64| x == 0.0 && x.is_sign_positive();
    if plain_zero(c.im) && c.re.is_sign_positive() {
        write!(f, "{}", c.re)
    } else if plain_zero(c.re) && c.im.is_sign_positive() {
        write!(f, "{}i", c.im)
    } else {
        write!(f, "({},{})", c.re, c.im)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDecl {
    pub name: String,
    pub dim: usize,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub expr: OperatorExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DissipatorDecl {
    /// Rate as written; `rate_value` is its constant-folded value.
    pub rate: OperatorExpr,
    pub rate_value: f64,
    pub jump: OperatorExpr,
    pub span: Span,
}

/// A parsed and name-checked model file. The Hamiltonian is the sum of its
/// lines; an empty list means `H = 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelDocument {
    pub spaces: Vec<SpaceDecl>,
    pub bindings: Vec<Binding>,
    pub hamiltonian: Vec<OperatorExpr>,
    pub dissipators: Vec<DissipatorDecl>,
}

impl ModelDocument {
    /// The Hamiltonian lines folded into one sum, or the literal `0`.
    pub fn hamiltonian_expr(&self) -> OperatorExpr {
        let mut terms = self.hamiltonian.iter().cloned();
        match terms.next() {
            None => OperatorExpr::real(0.0),
            Some(first) => terms.fold(first, OperatorExpr::sum),
        }
    }
}

impl fmt::Display for ModelDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spaces:")?;
        for s in &self.spaces {
            writeln!(f, "  {} = {}", s.name, s.dim)?;
        }
        if !self.bindings.is_empty() {
            writeln!(f, "\ndefine:")?;
            for b in &self.bindings {
                writeln!(f, "  {} = {}", b.name, b.expr)?;
            }
        }
        if !self.hamiltonian.is_empty() {
            writeln!(f, "\nhamiltonian:")?;
            for h in &self.hamiltonian {
                writeln!(f, "  {h}")?;
            }
        }
        if !self.dissipators.is_empty() {
            writeln!(f, "\ndissipators:")?;
            for d in &self.dissipators {
                writeln!(f, "  {}, {}", d.rate, d.jump)?;
            }
        }
        Ok(())
    }
}
