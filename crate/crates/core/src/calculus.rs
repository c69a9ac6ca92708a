//! Delta derivative and delta integral.
//!
//! The integral over `[a, b] ∩ T` is the sum of `g(t) μ(t)` over the
//! right-scattered points `t ∈ [a, b)` plus classical integrals over the
//! continuous segments. On segments every supported integrand is piecewise
//! polynomial, so both parts are evaluated exactly.

use crate::error::{text, Error, Result};
use crate::function::Function;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::timescale::{Component, TimeScale};

/// Delta derivative of `f` at `t ∈ T^κ`.
pub fn delta_derivative<S: Scalar>(f: &Function<S>, scale: &TimeScale<S>, t: &S) -> Result<S> {
    let t = scale.snap(t)?;
    if !scale.classify(&t)?.in_kappa {
        return Err(Error::NotInKappa(text(&t)));
    }
    let mu = scale.mu(&t)?;
    Ok(if mu > S::zero() { (f.eval(&(t.clone() + mu.clone())) - f.eval(&t)) / mu } else { f.derivative().eval(&t) })
}

/// Integrands that can be integrated exactly over any scale.
#[derive(Clone, Debug, PartialEq)]
pub enum Integrand<S> {
    /// `p(s)`
    Poly(Polynomial<S>),
    /// `p(σ(s))`
    Sigma(Polynomial<S>),
    /// `p^Δ(s)`
    Delta(Polynomial<S>),
    /// `|s - c|`
    AbsShift(S),
    Product(Box<Integrand<S>>, Box<Integrand<S>>),
}

impl<S: Scalar> Integrand<S> {
    pub fn of(f: &Function<S>) -> Self {
        Integrand::Poly(f.poly().clone())
    }

    pub fn sigma_of(f: &Function<S>) -> Self {
        Integrand::Sigma(f.poly().clone())
    }

    pub fn delta_of(f: &Function<S>) -> Self {
        Integrand::Delta(f.poly().clone())
    }

    pub fn times(self, other: Integrand<S>) -> Self {
        Integrand::Product(Box::new(self), Box::new(other))
    }

    /// Value at `t` given `σ(t)`; used at right-scattered points (`σ(t) > t`).
    pub fn eval_scattered(&self, t: &S, sigma: &S) -> S {
        match self {
            Integrand::Poly(p) => p.eval(t),
            Integrand::Sigma(p) => p.eval(sigma),
            Integrand::Delta(p) => (p.eval(sigma) - p.eval(t)) / (sigma.clone() - t.clone()),
            Integrand::AbsShift(c) => (t.clone() - c.clone()).abs(),
            Integrand::Product(x, y) => x.eval_scattered(t, sigma) * y.eval_scattered(t, sigma),
        }
    }

    /// Value at a right-dense point, where `σ(t) = t` and `p^Δ = p'`.
    pub fn eval_dense(&self, t: &S) -> S {
        self.dense_poly(t).eval(t)
    }

    fn kinks(&self, out: &mut Vec<S>) {
        match self {
            Integrand::AbsShift(c) => out.push(c.clone()),
            Integrand::Product(x, y) => {
                x.kinks(out);
                y.kinks(out);
            }
            _ => {}
        }
    }

    /// The polynomial agreeing with the integrand on the kink-free piece of a
    /// segment containing `probe`.
    fn dense_poly(&self, probe: &S) -> Polynomial<S> {
        match self {
            Integrand::Poly(p) | Integrand::Sigma(p) => p.clone(),
            Integrand::Delta(p) => p.derivative(),
            Integrand::AbsShift(c) => {
                let lin = Polynomial::shifted_identity(c.clone());
                if probe < c {
                    -&lin
                } else {
                    lin
                }
            }
            Integrand::Product(x, y) => &x.dense_poly(probe) * &y.dense_poly(probe),
        }
    }

    /// Exact classical integral over a segment on which `σ` is the identity.
    pub fn integrate_dense(&self, lo: &S, hi: &S) -> S {
        let mut cuts = Vec::new();
        self.kinks(&mut cuts);
        cuts.retain(|c| lo < c && c < hi);
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("ordered scalars"));
        cuts.dedup();
        let mut knots = Vec::with_capacity(cuts.len() + 2);
        knots.push(lo.clone());
        knots.extend(cuts);
        knots.push(hi.clone());
        knots
            .windows(2)
            .map(|w| {
                let mid = (w[0].clone() + w[1].clone()).half();
                self.dense_poly(&mid).integrate(&w[0], &w[1])
            })
            .fold(S::zero(), |acc, x| acc + x)
    }
}

/// `∫_a^b g(s) Δs`; `a > b` is handled by reversal.
pub fn delta_integral<S: Scalar>(g: &Integrand<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<S> {
    let a = scale.snap(a)?;
    let b = scale.snap(b)?;
    if a > b {
        return Ok(-forward_integral(g, scale, &b, &a));
    }
    Ok(forward_integral(g, scale, &a, &b))
}

fn forward_integral<S: Scalar>(g: &Integrand<S>, scale: &TimeScale<S>, a: &S, b: &S) -> S {
    let comps = scale.components();
    let mut total = S::zero();
    for (i, c) in comps.iter().enumerate() {
        if c.inf() >= b {
            break;
        }
        if c.sup() < a {
            continue;
        }
        if let Component::Interval { lo, hi } = c {
            let x0 = S::max_of(lo.clone(), a.clone());
            let x1 = S::min_of(hi.clone(), b.clone());
            if x0 < x1 {
                total = total + g.integrate_dense(&x0, &x1);
            }
        }
        // the supremum of every component except the last is right-scattered
        let sup = c.sup();
        if sup >= a && sup < b {
            let sigma = comps[i + 1].inf();
            total = total + g.eval_scattered(sup, sigma) * (sigma.clone() - sup.clone());
        }
    }
    total
}

/// `∫_a^b f(s) Δs`.
pub fn integral<S: Scalar>(f: &Function<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<S> {
    delta_integral(&Integrand::of(f), scale, a, b)
}

/// `∫_a^b f(σ(s)) Δs`.
pub fn integral_sigma<S: Scalar>(f: &Function<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<S> {
    delta_integral(&Integrand::sigma_of(f), scale, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Backend, Rational};
    use crate::timescale::ScaleSpec;

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    fn square() -> Function<Rational> {
        Function::polynomial(vec![q(0), q(0), q(1)])
    }

    fn ints(a: i64, b: i64) -> TimeScale<Rational> {
        TimeScale::from_spec(&ScaleSpec::integers(a, b, Backend::Rational)).unwrap()
    }

    fn unit() -> TimeScale<Rational> {
        TimeScale::from_spec(&ScaleSpec::interval("0", "1", Backend::Rational)).unwrap()
    }

    fn q2() -> TimeScale<Rational> {
        TimeScale::from_spec(&ScaleSpec::qlattice("2", 0, 3, Backend::Rational)).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(delta_derivative(&square(), &ints(0, 10), &q(3)).unwrap(), q(7));
        assert_eq!(delta_derivative(&square(), &unit(), &ratio(1, 2)).unwrap(), q(1));
        assert_eq!(delta_derivative(&square(), &q2(), &q(2)).unwrap(), q(6));
    }

    #[test]
    fn derivative_errors() {
        assert_eq!(delta_derivative(&square(), &ints(0, 10), &q(10)), Err(Error::NotInKappa("10".into())));
        assert!(matches!(delta_derivative(&square(), &ints(0, 10), &ratio(1, 2)), Err(Error::NotInScale(_))));
        // the maximum of an interval is left-dense and keeps its derivative
        assert_eq!(delta_derivative(&square(), &unit(), &q(1)).unwrap(), q(2));
    }

    #[test]
    fn integral_examples() {
        let id = Function::<Rational>::identity();
        // brute force: 0 + 1 + 2 + 3 + 4
        let brute: i64 = (0..5).sum();
        assert_eq!(integral(&id, &ints(0, 10), &q(0), &q(5)).unwrap(), q(brute));
        assert_eq!(integral(&id, &unit(), &q(0), &q(1)).unwrap(), ratio(1, 2));
        // brute force over {1, 2, 4}: t * (σ(t) - t)
        let brute: i64 = [(1, 2), (2, 4), (4, 8)].iter().map(|(t, s)| t * (s - t)).sum();
        assert_eq!(brute, 21);
        assert_eq!(integral(&id, &q2(), &q(1), &q(8)).unwrap(), q(brute));
        assert_eq!(integral(&square(), &q2(), &q(4), &q(4)).unwrap(), q(0));
    }

    #[test]
    fn integral_reversal_and_membership() {
        let id = Function::<Rational>::identity();
        assert_eq!(integral(&id, &ints(0, 10), &q(5), &q(0)).unwrap(), q(-10));
        assert!(integral(&id, &ints(0, 10), &q(0), &ratio(1, 2)).is_err());
    }

    #[test]
    fn hybrid_scale_integral() {
        let t = TimeScale::<Rational>::from_spec(
            &ScaleSpec::from_json(
                r#"{"components":[{"interval":["0","1"]},{"point":"2"},{"point":"4"}],"backend":"rational"}"#,
            )
            .unwrap(),
        )
        .unwrap();
        // ∫_0^1 s ds + 1 * (2 - 1) + 2 * (4 - 2)
        let id = Function::identity();
        assert_eq!(integral(&id, &t, &q(0), &q(4)).unwrap(), ratio(1, 2) + q(1) + q(4));
        // f(σ(s)) picks σ(1) = 2 at the gap
        assert_eq!(integral_sigma(&id, &t, &q(0), &q(2)).unwrap(), ratio(1, 2) + q(2));
    }

    #[test]
    fn abs_integrand_splits_at_kink() {
        let g = Integrand::AbsShift(ratio(1, 4));
        // ∫_0^1 |s - 1/4| ds = (1/4)^2/2 + (3/4)^2/2 = 10/32
        assert_eq!(delta_integral(&g, &unit(), &q(0), &q(1)).unwrap(), ratio(5, 16));
        let g = Integrand::AbsShift(ratio(3, 2));
        // |0 - 3/2| + |1 - 3/2| + |2 - 3/2|
        assert_eq!(delta_integral(&g, &ints(0, 3), &q(0), &q(3)).unwrap(), ratio(5, 2));
    }

    #[test]
    fn delta_integrand_matches_fundamental_theorem() {
        let f = Function::polynomial(vec![q(1), q(-2), q(0), q(3)]);
        for scale in [ints(-2, 5), q2(), unit()] {
            let (a, b) = (scale.min().clone(), scale.max().clone());
            let lhs = delta_integral(&Integrand::delta_of(&f), &scale, &a, &b).unwrap();
            assert_eq!(lhs, f.eval(&b) - f.eval(&a));
        }
    }
}
