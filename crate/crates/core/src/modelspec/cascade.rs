//! Three-level cascade atom driving two cavity modes, in the displaced picture.
//!
//! Layout `(xi: 3, a: N_a + 1, b: N_b + 1)`,
//!
//! ```text
//! H = Db s33 - Da s11
//!   + ga (a^H s12 + a s12^H) + gb (b^H s23 + b s23^H)
//!   + (conj(Wa) s12 + Wa s12^H) + (conj(Wb) s23 + Wb s23^H)
//! ```
//!
//! with jumps `[(Ga, a), (Gb, b), (G12, s12), (G23, s23)]`. The cavity
//! displacements are `alpha = Wa / ga` and `beta = Wb / gb`.

use faer::c64;

use super::ast::{Binding, DissipatorDecl, ModelDocument, OperatorExpr, Primitive, SpaceDecl, Span};
use crate::error::{MeqError, Result};
use crate::hilbert::{annihilation, embed, transition, Operator, SpaceLayout};
use crate::superspace::LindbladModel;

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeParams {
    pub delta_a: f64,
    pub delta_b: f64,
    pub g_a: f64,
    pub g_b: f64,
    pub gamma_12: f64,
    pub gamma_23: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub omega_a: c64,
    pub omega_b: c64,
    pub n_a: usize,
    pub n_b: usize,
}

impl Default for CascadeParams {
    /// The benchmark point: resonant, unit couplings, `Wa = 20`, `Wb = 5`,
    /// truncations 4 and 2 (d = 45).
    fn default() -> Self {
        CascadeParams {
            delta_a: 0.0,
            delta_b: 0.0,
            g_a: 1.0,
            g_b: 1.0,
            gamma_12: 1.0,
            gamma_23: 1.0,
            gamma_a: 3.0,
            gamma_b: 3.0,
            omega_a: c64::new(20.0, 0.0),
            omega_b: c64::new(5.0, 0.0),
            n_a: 4,
            n_b: 2,
        }
    }
}

impl CascadeParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("gamma_12", self.gamma_12),
            ("gamma_23", self.gamma_23),
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
        ];
        for (name, r) in rates {
            if !(r.is_finite() && r > 0.0) {
                return Err(MeqError::Validation(format!("{name} must be positive, got {r}")));
            }
        }
        let reals = [("delta_a", self.delta_a), ("delta_b", self.delta_b), ("g_a", self.g_a), ("g_b", self.g_b)];
        for (name, v) in reals {
            if !v.is_finite() {
                return Err(MeqError::Validation(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        3 * (self.n_a + 1) * (self.n_b + 1)
    }

    /// `alpha = Wa / ga`.
    pub fn alpha(&self) -> Result<c64> {
        if self.g_a == 0.0 {
            return Err(MeqError::Argument("alpha = Omega_a / g_a needs g_a != 0".into()));
        }
        Ok(self.omega_a / self.g_a)
    }

    /// `beta = Wb / gb`.
    pub fn beta(&self) -> Result<c64> {
        if self.g_b == 0.0 {
            return Err(MeqError::Argument("beta = Omega_b / g_b needs g_b != 0".into()));
        }
        Ok(self.omega_b / self.g_b)
    }

    /// Same parameters with both truncations raised by one.
    pub fn with_larger_truncation(&self) -> Self {
        CascadeParams { n_a: self.n_a + 1, n_b: self.n_b + 1, ..self.clone() }
    }
}

pub fn cascade_layout(params: &CascadeParams) -> Result<SpaceLayout> {
    SpaceLayout::new([("xi", 3), ("a", params.n_a + 1), ("b", params.n_b + 1)])
}

/// Full-space operators of the cascade model.
#[derive(Clone, Debug)]
pub struct CascadeOperators {
    pub s11: Operator,
    pub s22: Operator,
    pub s33: Operator,
    pub s12: Operator,
    pub s23: Operator,
    pub a: Operator,
    pub b: Operator,
}

impl CascadeOperators {
    pub fn new(params: &CascadeParams) -> Result<Self> {
        let layout = cascade_layout(params)?;
        let atom = |j, k| embed(&layout, "xi", &transition(3, j, k)?);
        Ok(CascadeOperators {
            s11: atom(1, 1)?,
            s22: atom(2, 2)?,
            s33: atom(3, 3)?,
            s12: atom(1, 2)?,
            s23: atom(2, 3)?,
            a: embed(&layout, "a", &annihilation(params.n_a + 1)?)?,
            b: embed(&layout, "b", &annihilation(params.n_b + 1)?)?,
        })
    }

    /// `(s11, s22, s33, a^H a, b^H b)`.
    pub fn population_observables(&self) -> Result<Vec<(&'static str, Operator)>> {
        Ok(vec![
            ("s11", self.s11.clone()),
            ("s22", self.s22.clone()),
            ("s33", self.s33.clone()),
            ("a'*a", self.a.adjoint().matmul(&self.a)?),
            ("b'*b", self.b.adjoint().matmul(&self.b)?),
        ])
    }
}

pub fn cascade_model(params: &CascadeParams) -> Result<LindbladModel> {
    params.validate()?;
    let ops = CascadeOperators::new(params)?;
    let re = |x: f64| c64::new(x, 0.0);
    let pair = |x: &Operator, y: &Operator| -> Result<Operator> { x.adjoint().matmul(y) };

    let detuning = ops.s33.scale(re(params.delta_b)).sub(&ops.s11.scale(re(params.delta_a)))?;
    let coupling_a = pair(&ops.a, &ops.s12)?.add(&ops.a.matmul(&ops.s12.adjoint())?)?.scale(re(params.g_a));
    let coupling_b = pair(&ops.b, &ops.s23)?.add(&ops.b.matmul(&ops.s23.adjoint())?)?.scale(re(params.g_b));
    let rabi_a = ops.s12.scale(params.omega_a.conj()).add(&ops.s12.adjoint().scale(params.omega_a))?;
    let rabi_b = ops.s23.scale(params.omega_b.conj()).add(&ops.s23.adjoint().scale(params.omega_b))?;
    let h = detuning.add(&coupling_a)?.add(&coupling_b)?.add(&rabi_a)?.add(&rabi_b)?;

    LindbladModel::new(
        h,
        vec![(params.gamma_a, ops.a), (params.gamma_b, ops.b), (params.gamma_12, ops.s12), (params.gamma_23, ops.s23)],
    )
}

/// The cascade model as a model document, mirroring [`cascade_model`] term by term.
pub fn cascade_document(params: &CascadeParams) -> Result<ModelDocument> {
    params.validate()?;
    let id = OperatorExpr::ident;
    let re = |x: f64| c64::new(x, 0.0);
    let span = Span::default();
    let bind = |name: &str, p: Primitive| Binding { name: name.into(), expr: OperatorExpr::primitive(p), span };
    let xi = || "xi".to_string();
    let coupling = |mode: &str, s: &str, g: f64| {
        id(mode).adjoint().product(id(s)).sum(id(mode).product(id(s).adjoint())).scaled(re(g))
    };
    // `+ 0.0` keeps a real drive's conjugate free of a negative zero.
    let rabi = |s: &str, w: c64| id(s).scaled(c64::new(w.re, -w.im + 0.0)).sum(id(s).adjoint().scaled(w));
    let jump = |rate: f64, name: &str| DissipatorDecl {
        rate: OperatorExpr::real(rate),
        rate_value: rate,
        jump: id(name),
        span,
    };
    Ok(ModelDocument {
        spaces: vec![
            SpaceDecl { name: "xi".into(), dim: 3, span },
            SpaceDecl { name: "a".into(), dim: params.n_a + 1, span },
            SpaceDecl { name: "b".into(), dim: params.n_b + 1, span },
        ],
        bindings: vec![
            bind("s11", Primitive::Projector { space: xi(), j: 1 }),
            bind("s22", Primitive::Projector { space: xi(), j: 2 }),
            bind("s33", Primitive::Projector { space: xi(), j: 3 }),
            bind("s12", Primitive::Transition { space: xi(), j: 1, k: 2 }),
            bind("s23", Primitive::Transition { space: xi(), j: 2, k: 3 }),
            bind("a", Primitive::Annihilation { space: "a".into() }),
            bind("b", Primitive::Annihilation { space: "b".into() }),
        ],
        hamiltonian: vec![
            id("s33").scaled(re(params.delta_b)).difference(id("s11").scaled(re(params.delta_a))),
            coupling("a", "s12", params.g_a),
            coupling("b", "s23", params.g_b),
            rabi("s12", params.omega_a),
            rabi("s23", params.omega_b),
        ],
        dissipators: vec![
            jump(params.gamma_a, "a"),
            jump(params.gamma_b, "b"),
            jump(params.gamma_12, "s12"),
            jump(params.gamma_23, "s23"),
        ],
    })
}

/// Canonical model-file text for the cascade benchmark.
pub fn render_cascade(params: &CascadeParams) -> Result<String> {
    let doc = cascade_document(params)?;
    Ok(format!(
        "# Cascade three-level atom (xi) driving cavity modes a and b, displaced picture.\n\
         # alpha = {}, beta = {}\n{doc}",
        params.alpha().map_or_else(|_| "undefined".into(), fmt_complex),
        params.beta().map_or_else(|_| "undefined".into(), fmt_complex),
    ))
}

fn fmt_complex(c: c64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}, {})", c.re, c.im)
    }
}
