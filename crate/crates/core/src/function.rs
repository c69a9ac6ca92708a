//! Symbolically known functions `f` together with their classical derivative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{NumLit, Scalar};

/// Input document for a function.
///
/// `{"poly":["c0","c1",...]}` (ascending degree), `{"builtin":"identity"}` or
/// `{"builtin":{"constant":"c"}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionSpec {
    Poly(Vec<NumLit>),
    Builtin(Builtin),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Identity,
    Constant(NumLit),
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("function spec: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    Polynomial,
    Identity,
    Constant,
}

/// A function known in closed form. All supported kinds are polynomials, so
/// evaluation stays inside the scalar backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Function<S> {
    kind: FunctionKind,
    poly: Polynomial<S>,
}

impl<S: Scalar> Function<S> {
    pub fn from_spec(spec: &FunctionSpec) -> Result<Self> {
        Ok(match spec {
            FunctionSpec::Poly(coeffs) => {
                Function::polynomial(coeffs.iter().map(|c| c.parse()).collect::<Result<Vec<S>>>()?)
            }
            FunctionSpec::Builtin(Builtin::Identity) => Function::identity(),
            FunctionSpec::Builtin(Builtin::Constant(c)) => Function::constant(c.parse()?),
        })
    }

    pub fn polynomial(coeffs: Vec<S>) -> Self {
        Function { kind: FunctionKind::Polynomial, poly: Polynomial::new(coeffs) }
    }

    pub fn from_poly(poly: Polynomial<S>) -> Self {
        Function { kind: FunctionKind::Polynomial, poly }
    }

    pub fn identity() -> Self {
        Function { kind: FunctionKind::Identity, poly: Polynomial::identity() }
    }

    pub fn constant(c: S) -> Self {
        Function { kind: FunctionKind::Constant, poly: Polynomial::constant(c) }
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn poly(&self) -> &Polynomial<S> {
        &self.poly
    }

    pub fn eval(&self, x: &S) -> S {
        self.poly.eval(x)
    }

    /// Classical derivative `f'`.
    pub fn derivative(&self) -> Polynomial<S> {
        self.poly.derivative()
    }

    /// True when `f(x) = x`, whatever kind it was declared as.
    pub fn is_identity(&self) -> bool {
        self.poly == Polynomial::identity()
    }

    pub fn scaled(&self, c: &S) -> Self {
        Function::from_poly(self.poly.scale(c))
    }

    pub fn to_spec(&self) -> FunctionSpec {
        match self.kind {
            FunctionKind::Identity => FunctionSpec::Builtin(Builtin::Identity),
            FunctionKind::Constant => {
                FunctionSpec::Builtin(Builtin::Constant(NumLit::from_scalar(&self.poly.eval(&S::zero()))))
            }
            FunctionKind::Polynomial => {
                FunctionSpec::Poly(self.poly.coeffs().iter().map(NumLit::from_scalar).collect())
            }
        }
    }
}
