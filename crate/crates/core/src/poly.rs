//! Dense univariate polynomials over a [`Scalar`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Coefficients in ascending degree; trailing zeros are trimmed so the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The identity `x`.
    pub fn identity() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    /// `x - c`.
    pub fn shifted_identity(c: S) -> Self {
        Self::new(vec![-c, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * S::from_int(k as i64)).collect())
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(S::zero());
        out.extend(self.coeffs.iter().enumerate().map(|(k, c)| c.clone() / S::from_int(k as i64 + 1)));
        Self::new(out)
    }

    /// Classical integral over `[lo, hi]`. Exact backends difference the
    /// antiderivative; floats integrate `p(lo + u)` over `[0, hi - lo]`,
    /// which avoids cancelling two large antiderivative values on short pieces.
    pub fn integrate(&self, lo: &S, hi: &S) -> S {
        if S::is_exact() {
            let anti = self.antiderivative();
            return anti.eval(hi) - anti.eval(lo);
        }
        self.taylor_shift(lo).antiderivative().eval(&(hi.clone() - lo.clone()))
    }

    /// `q(u) = p(x0 + u)`, by repeated synthetic division.
    pub fn taylor_shift(&self, x0: &S) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let carry = c[j + 1].clone() * x0.clone();
                c[j] = c[j].clone() + carry;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}
