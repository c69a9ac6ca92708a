//! Reference values computed independently of the engine.
//!
//! [`oracle_integral`] enumerates the scale's points and walks them left to
//! right, and integrates continuous pieces by trapezoid sums on `2^k`
//! subdivisions with Romberg extrapolation. It evaluates integrands with its
//! own pointwise evaluator. The remaining functions are the printed closed
//! forms of the continuous, integer and quantum specializations.

use crate::calculus::Integrand;
use crate::error::{text, Error, Result};
use crate::scalar::Scalar;
use crate::timescale::{Component, TimeScale};

const MAX_LEVEL_EXACT: usize = 12;
const MAX_LEVEL_FLOAT: usize = 20;

fn horner<S: Scalar>(coeffs: &[S], x: &S) -> S {
    coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
}

fn slope_at<S: Scalar>(coeffs: &[S], x: &S) -> S {
    let mut acc = S::zero();
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * x.clone() + c.clone() * S::from_int(k as i64);
    }
    acc
}

/// Value of `g` at `t` when the next point of the scale is `next`
/// (`next == t` at dense points).
fn value<S: Scalar>(g: &Integrand<S>, t: &S, next: &S) -> S {
    let dense = t == next;
    match g {
        Integrand::Poly(p) => horner(p.coeffs(), t),
        Integrand::Sigma(p) => horner(p.coeffs(), next),
        Integrand::Delta(p) if dense => slope_at(p.coeffs(), t),
        Integrand::Delta(p) => (horner(p.coeffs(), next) - horner(p.coeffs(), t)) / (next.clone() - t.clone()),
        Integrand::AbsShift(c) => (t.clone() - c.clone()).abs(),
        Integrand::Product(x, y) => value(x, t, next) * value(y, t, next),
    }
}

fn kinks<S: Scalar>(g: &Integrand<S>, out: &mut Vec<S>) {
    match g {
        Integrand::AbsShift(c) => out.push(c.clone()),
        Integrand::Product(x, y) => {
            kinks(x, out);
            kinks(y, out);
        }
        _ => {}
    }
}

/// Romberg table on `[lo, hi]`. Exact backends stop once two consecutive
/// diagonal entries repeat twice; floats once they agree to `tol`.
fn romberg<S: Scalar>(g: &Integrand<S>, lo: &S, hi: &S, tol: &S) -> S {
    let f = |x: &S| value(g, x, x);
    let width = hi.clone() - lo.clone();
    let mut row = vec![(f(lo) + f(hi)) * width.clone().half()];
    let mut n: i64 = 1;
    let mut repeats = 0;
    let cap = if S::is_exact() { MAX_LEVEL_EXACT } else { MAX_LEVEL_FLOAT };
    for level in 1..=cap {
        let h = width.clone() / S::from_int(2 * n);
        let mut sum = S::zero();
        for i in 0..n {
            sum = sum + f(&(lo.clone() + h.clone() * S::from_int(2 * i + 1)));
        }
        let mut next = vec![row[0].clone().half() + h * sum];
        let mut factor = S::one();
        for j in 1..=level {
            factor = factor * S::from_int(4);
            let prev = next[j - 1].clone();
            next.push(prev.clone() + (prev - row[j - 1].clone()) / (factor.clone() - S::one()));
        }
        n *= 2;
        let (old, new) = (row[level - 1].clone(), next[level].clone());
        row = next;
        if S::is_exact() {
            repeats = if old == new { repeats + 1 } else { 0 };
            if repeats >= 2 {
                return new;
            }
        } else if level >= 3 && (new.clone() - old).abs() <= tol.clone() * S::max_of(S::one(), new.abs()) {
            return new;
        }
    }
    row.pop().expect("nonempty row")
}

/// `∫_a^b g(s) Δs` by enumeration and refinement; `tol` is the float
/// convergence target (ignored on exact backends).
pub fn oracle_integral<S: Scalar>(g: &Integrand<S>, scale: &TimeScale<S>, a: &S, b: &S, tol: &S) -> Result<S> {
    for x in [a, b] {
        if !scale.contains(x) {
            return Err(Error::NotInScale(text(x)));
        }
    }
    if a > b {
        return Ok(-oracle_integral(g, scale, b, a, tol)?);
    }
    // explicit atoms: every isolated point, every segment and its right end
    let mut scattered: Vec<(S, S)> = Vec::new();
    let mut segments: Vec<(S, S)> = Vec::new();
    let comps = scale.components();
    for (i, c) in comps.iter().enumerate() {
        match c {
            Component::Interval { lo, hi } => segments.push((lo.clone(), hi.clone())),
            Component::Point(_) => {}
        }
        if let Some(next) = comps.get(i + 1) {
            scattered.push((c.sup().clone(), next.inf().clone()));
        }
    }
    let tol_pt = scale.tolerance().clone();
    let mut total = S::zero();
    for (t, next) in &scattered {
        if t.clone() + tol_pt.clone() >= *a && t.clone() + tol_pt.clone() < *b {
            total = total + value(g, t, next) * (next.clone() - t.clone());
        }
    }
    let mut cuts = Vec::new();
    kinks(g, &mut cuts);
    for (lo, hi) in &segments {
        let x0 = S::max_of(lo.clone(), a.clone());
        let x1 = S::min_of(hi.clone(), b.clone());
        if x0 >= x1 {
            continue;
        }
        let mut knots = vec![x0.clone()];
        knots.extend(cuts.iter().filter(|c| **c > x0 && **c < x1).cloned());
        knots.push(x1);
        knots.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
        for w in knots.windows(2) {
            if w[0] < w[1] {
                total = total + romberg(g, &w[0], &w[1], tol);
            }
        }
    }
    Ok(total)
}

/// Continuous specialization:
/// `M [(b-a)((1-λ)² + λ²)/4 + (t - (a+b)/2)²/(b-a)]`.
pub fn continuous_rhs<S: Scalar>(m: &S, a: &S, b: &S, lambda: &S, t: &S) -> S {
    let len = b.clone() - a.clone();
    let one_minus = S::one() - lambda.clone();
    let centered = t.clone() - (a.clone() + b.clone()).half();
    m.clone()
        * (len.clone() * (one_minus.clone() * one_minus + lambda.clone() * lambda.clone()) / S::from_int(4)
            + centered.clone() * centered / len)
}

/// Integer specialization on `{0, ..., n}` at `t = i`:
/// `(M/n)(|i - (n+1)/2|² + ((2λ² - 2λ + 1) n² - 1)/4)`.
pub fn integer_rhs<S: Scalar>(m: &S, n: i64, i: &S, lambda: &S) -> S {
    let n_s = S::from_int(n);
    let centered = i.clone() - (n_s.clone() + S::one()).half();
    let quad = S::from_int(2) * lambda.clone() * lambda.clone() - S::from_int(2) * lambda.clone() + S::one();
    m.clone() / n_s.clone() * (centered.clone() * centered + (quad * n_s.clone() * n_s - S::one()) / S::from_int(4))
}

/// The four `h_2` values of the quantum specialization with `a = q^m`,
/// `b = q^n`, as product expressions (the last one with `b` as its first
/// argument).
pub fn quantum_terms<S: Scalar>(q: &S, a: &S, b: &S, lambda: &S, t: &S) -> [S; 4] {
    let (qm, qn) = (a.clone(), b.clone());
    let qm1 = qm.clone() * q.clone();
    let qn1 = qn.clone() * q.clone();
    let hl = lambda.clone().half();
    let keep = S::one() - hl.clone();
    let denom = S::one() + q.clone();
    [
        hl.clone() * (qm.clone() - qn.clone()) * (qm.clone() - keep.clone() * qm1.clone() - hl.clone() * qn1.clone())
            / denom.clone(),
        (t.clone() - keep.clone() * qm.clone() - hl.clone() * qn.clone())
            * (t.clone() - keep.clone() * qm1.clone() - hl.clone() * qn1.clone())
            / denom.clone(),
        (t.clone() - keep.clone() * qn.clone() - hl.clone() * qm.clone())
            * (t.clone() - keep.clone() * qn1.clone() - hl.clone() * qm1.clone())
            / denom.clone(),
        hl.clone() * (qn.clone() - qm) * (qn - keep * qn1 - hl * qm1) / denom,
    ]
}
