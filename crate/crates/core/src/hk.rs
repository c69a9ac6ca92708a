//! The generalized monomials `h_k(t, s)`.
//!
//! `h_0 = 1` and `h_{k+1}(t, s) = ∫_s^t h_k(τ, s) Δτ`. The recursive route
//! keeps `τ ↦ h_k(τ, s)` as a piecewise function on `T` between `s` and `t`
//! (a polynomial on each continuous segment, a value at each scattered
//! point) and integrates it exactly `k` times.

use serde::Serialize;

use crate::error::{text, Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::timescale::{Cell, Family, TimeScale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HkMethod {
    Recursive,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HkValue<S> {
    pub k: usize,
    pub t: S,
    pub s: S,
    pub value: S,
    pub method: HkMethod,
}

#[derive(Clone, Debug)]
enum Piece<S> {
    Segment { lo: S, hi: S, poly: Polynomial<S> },
    Point { x: S, value: S },
}

impl<S: Scalar> Piece<S> {
    fn value_at_sup(&self) -> S {
        match self {
            Piece::Segment { hi, poly, .. } => poly.eval(hi),
            Piece::Point { value, .. } => value.clone(),
        }
    }

    fn inf(&self) -> &S {
        match self {
            Piece::Segment { lo, .. } => lo,
            Piece::Point { x, .. } => x,
        }
    }

    fn sup(&self) -> &S {
        match self {
            Piece::Segment { hi, .. } => hi,
            Piece::Point { x, .. } => x,
        }
    }
}

/// `G(τ) = ∫_s^τ g(r) Δr` on the same pieces, where `s` is the leftmost
/// (`forward`) or rightmost (`!forward`) point of the range.
fn antiderivative<S: Scalar>(pieces: &[Piece<S>], forward: bool) -> Vec<Piece<S>> {
    let mut out: Vec<Piece<S>> = Vec::with_capacity(pieces.len());
    if forward {
        let mut acc = S::zero();
        for (i, p) in pieces.iter().enumerate() {
            match p {
                Piece::Segment { lo, hi, poly } => {
                    let anti = poly.antiderivative();
                    let shift = acc.clone() - anti.eval(lo);
                    let g = &anti + &Polynomial::constant(shift);
                    acc = g.eval(hi);
                    out.push(Piece::Segment { lo: lo.clone(), hi: hi.clone(), poly: g });
                }
                Piece::Point { x, .. } => out.push(Piece::Point { x: x.clone(), value: acc.clone() }),
            }
            if let Some(next) = pieces.get(i + 1) {
                acc = acc + p.value_at_sup() * (next.inf().clone() - p.sup().clone());
            }
        }
    } else {
        let mut acc = S::zero();
        let mut rev: Vec<Piece<S>> = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.iter().enumerate().rev() {
            if let Some(next) = pieces.get(i + 1) {
                // step left across the gap after p: G(sup) = G(σ(sup)) - g(sup) μ(sup)
                acc = acc - p.value_at_sup() * (next.inf().clone() - p.sup().clone());
            }
            match p {
                Piece::Segment { lo, hi, poly } => {
                    let anti = poly.antiderivative();
                    let shift = acc.clone() - anti.eval(hi);
                    let g = &anti + &Polynomial::constant(shift);
                    acc = g.eval(lo);
                    rev.push(Piece::Segment { lo: lo.clone(), hi: hi.clone(), poly: g });
                }
                Piece::Point { x, .. } => rev.push(Piece::Point { x: x.clone(), value: acc.clone() }),
            }
        }
        rev.reverse();
        out = rev;
    }
    out
}

/// `h_k(t, s)` by repeated delta integration. Requires `t, s ∈ T`.
pub fn h_k<S: Scalar>(scale: &TimeScale<S>, k: usize, t: &S, s: &S) -> Result<HkValue<S>> {
    let t = scale.snap(t)?;
    let s = scale.snap(s)?;
    if k == 0 || t == s {
        let value = if k == 0 { S::one() } else { S::zero() };
        return Ok(HkValue { k, t, s, value, method: HkMethod::Recursive });
    }
    let forward = t > s;
    let (lo, hi) = if forward { (&s, &t) } else { (&t, &s) };
    let mut pieces: Vec<Piece<S>> = scale
        .cells(lo, hi)
        .into_iter()
        .map(|c| match c {
            Cell::Segment { lo, hi } => Piece::Segment { lo, hi, poly: Polynomial::constant(S::one()) },
            Cell::Point(x) => Piece::Point { x, value: S::one() },
        })
        .collect();
    for _ in 0..k {
        pieces = antiderivative(&pieces, forward);
    }
    let end = if forward { pieces.last() } else { pieces.first() };
    let value = match end.expect("range holds s and t") {
        Piece::Segment { poly, .. } => poly.eval(&t),
        Piece::Point { value, .. } => value.clone(),
    };
    Ok(HkValue { k, t, s, value, method: HkMethod::Recursive })
}

/// Closed form of `h_2` on the canonical scales, extended polynomially to
/// arguments that need not lie on the scale.
pub fn h2_closed_form<S: Scalar>(family: &Family<S>, t: &S, s: &S) -> Result<S> {
    let two = S::from_int(2);
    let d = t.clone() - s.clone();
    Ok(match family {
        Family::Reals => d.clone() * d / two,
        Family::Integers => d.clone() * (d - S::one()) / two,
        Family::QLattice(q) => {
            if *q <= S::one() {
                return Err(Error::InvalidQLattice { q: text(q), m: 0, n: 0 });
            }
            // ∏_{ν=0}^{1} (t - q^ν s) / (Σ_{μ=0}^{ν} q^μ)
            d * (t.clone() - q.clone() * s.clone()) / (S::one() + q.clone())
        }
    })
}

/// `h_k` through the closed form when the scale is canonical (k ≤ 2).
pub fn h_k_closed_form<S: Scalar>(family: &Family<S>, k: usize, t: &S, s: &S) -> Result<HkValue<S>> {
    let value = match k {
        0 => S::one(),
        1 => t.clone() - s.clone(),
        2 => h2_closed_form(family, t, s)?,
        _ => return Err(Error::NoClosedForm { k }),
    };
    Ok(HkValue { k, t: t.clone(), s: s.clone(), value, method: HkMethod::ClosedForm })
}
