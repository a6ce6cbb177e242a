use std::collections::BTreeMap;

use faer::c64;

use super::ast::{ExprKind, ModelDocument, OperatorExpr, Primitive, Span};
use super::parser::{check_primitive, parse_expr, semantic};
use crate::error::{MeqError, Result};
use crate::hilbert::{annihilation, embed, transition, Operator, SpaceLayout};
use crate::linalg::{Matrix, Storage};
use crate::superspace::LindbladModel;

#[derive(Clone, Debug)]
enum Value {
    Scalar(c64),
    Op(Operator),
}

/// Evaluated bindings of a model, for turning further expressions
/// (observables, initial states) into operators.
#[derive(Clone, Debug)]
pub struct ModelContext {
    layout: SpaceLayout,
    values: BTreeMap<String, Value>,
}

impl ModelContext {
    pub fn new(doc: &ModelDocument) -> Result<Self> {
        let layout = SpaceLayout::new(doc.spaces.iter().map(|s| (s.name.clone(), s.dim)))?;
        let mut ctx = ModelContext { layout, values: BTreeMap::new() };
        for b in &doc.bindings {
            let v = ctx.eval(&b.expr)?;
            ctx.values.insert(b.name.clone(), v);
        }
        Ok(ctx)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    /// Full-space operator for `expr`; a scalar `c` means `c I`.
    pub fn evaluate(&self, expr: &OperatorExpr) -> Result<Operator> {
        Ok(self.to_operator(self.eval(expr)?))
    }

    pub fn evaluate_str(&self, text: &str) -> Result<Operator> {
        self.evaluate(&parse_expr(text)?)
    }

    fn to_operator(&self, v: Value) -> Operator {
        match v {
            Value::Op(o) => o,
            Value::Scalar(c) => Operator::identity(&self.layout).scale(c),
        }
    }

    fn primitive(&self, p: &Primitive, span: Span) -> Result<Operator> {
        let spaces: BTreeMap<&str, usize> = self.layout.subsystems().iter().map(|s| (s.name.as_str(), s.dim)).collect();
        let dim = check_primitive(&spaces, p, span)?;
        let local = match p {
            Primitive::Identity { .. } => Matrix::identity(dim, Storage::Dense),
            Primitive::Transition { j, k, .. } => transition(dim, *j, *k)?,
            Primitive::Projector { j, .. } => transition(dim, *j, *j)?,
            Primitive::Annihilation { .. } => annihilation(dim)?,
        };
        embed(&self.layout, p.space(), &local)
    }

    fn eval(&self, e: &OperatorExpr) -> Result<Value> {
        use Value::*;
        Ok(match &e.kind {
            ExprKind::Literal(c) => Scalar(*c),
            ExprKind::Ident(name) => self
                .values
                .get(name)
                .cloned()
                .ok_or_else(|| semantic(e.span, format!("unknown identifier `{name}`")))?,
            ExprKind::Primitive(p) => Op(self.primitive(p, e.span)?),
            ExprKind::Sum(a, b) => self.combine(self.eval(a)?, self.eval(b)?, c64::new(1.0, 0.0))?,
            ExprKind::Difference(a, b) => self.combine(self.eval(a)?, self.eval(b)?, c64::new(-1.0, 0.0))?,
            ExprKind::Product(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Scalar(x), Scalar(y)) => Scalar(x * y),
                (Scalar(x), Op(o)) | (Op(o), Scalar(x)) => Op(o.scale(x)),
                (Op(x), Op(y)) => Op(x.matmul(&y)?),
            },
            ExprKind::ScalarMul(c, x) => match self.eval(x)? {
                Scalar(y) => Scalar(c * y),
                Op(o) => Op(o.scale(*c)),
            },
            ExprKind::Neg(x) => match self.eval(x)? {
                Scalar(y) => Scalar(-y),
                Op(o) => Op(o.scale(c64::new(-1.0, 0.0))),
            },
            ExprKind::Adjoint(x) => match self.eval(x)? {
                Scalar(y) => Scalar(y.conj()),
                Op(o) => Op(o.adjoint()),
            },
        })
    }

    /// `a + sign * b`.
    fn combine(&self, a: Value, b: Value, sign: c64) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + sign * y),
            (a, b) => {
                let (a, b) = (self.to_operator(a), self.to_operator(b));
                Value::Op(Operator::new(a.layout().clone(), a.matrix().axpby(c64::new(1.0, 0.0), b.matrix(), sign)?)?)
            }
        })
    }
}

/// Evaluates a document into a [`LindbladModel`], returning the evaluation
/// context alongside it.
pub fn build_model_with_context(doc: &ModelDocument) -> Result<(LindbladModel, ModelContext)> {
    let ctx = ModelContext::new(doc)?;
    let h = ctx.evaluate(&doc.hamiltonian_expr())?;
    let dissipators = doc
        .dissipators
        .iter()
        .map(|d| {
            if !(d.rate_value.is_finite() && d.rate_value > 0.0) {
                return Err(MeqError::from(semantic(
                    d.rate.span,
                    format!("rate must be positive, got {}", d.rate_value),
                )));
            }
            Ok((d.rate_value, ctx.evaluate(&d.jump)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((LindbladModel::new(h, dissipators)?, ctx))
}

pub fn build_model(doc: &ModelDocument) -> Result<LindbladModel> {
    Ok(build_model_with_context(doc)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelspec::parse_model;

    #[test]
    fn product_order_matters() {
        let doc = parse_model("spaces:\n m = 3\n").unwrap();
        let ctx = ModelContext::new(&doc).unwrap();
        let aad = ctx.evaluate_str("a(m)*a(m)'").unwrap();
        let ada = ctx.evaluate_str("a(m)'*a(m)").unwrap();
        assert!(aad.max_abs_diff(&ada).unwrap() > 0.5);
        for n in 0..3 {
            assert!((ada.get(n, n).re - n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_means_multiple_of_identity() {
        let doc = parse_model("spaces:\n q = 2\n").unwrap();
        let ctx = ModelContext::new(&doc).unwrap();
        let op = ctx.evaluate_str("2 + trans(q,1,1)").unwrap();
        assert_eq!(op.get(0, 0).re, 3.0);
        assert_eq!(op.get(1, 1).re, 2.0);
        assert_eq!(ctx.evaluate_str("(1,2)'").unwrap().get(0, 0), c64::new(1.0, -2.0));
    }

    #[test]
    fn transition_adjoint_swaps_levels() {
        let doc = parse_model("spaces:\n x = 3\n").unwrap();
        let ctx = ModelContext::new(&doc).unwrap();
        let lhs = ctx.evaluate_str("trans(x,1,3)'").unwrap();
        let rhs = ctx.evaluate_str("trans(x,3,1)").unwrap();
        assert_eq!(lhs.max_abs_diff(&rhs).unwrap(), 0.0);
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let doc = parse_model("spaces:\n q = 2\nhamiltonian:\n trans(q,1,2)\n").unwrap();
        assert!(matches!(build_model(&doc), Err(MeqError::Validation(_))));
    }
}
