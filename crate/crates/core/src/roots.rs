//! Real root isolation for polynomials on a closed interval.

use crate::poly::Polynomial;
use crate::scalar::Scalar;

const BISECTION_WIDTH: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Roots of `p` in the open interval `(lo, hi)` at which `p` changes sign or
/// vanishes exactly, in increasing order.
///
/// Critical points split `[lo, hi]` into monotone pieces, each holding at
/// most one root, which is then refined by bisection to width 1e-12.
pub fn roots_in<S: Scalar>(p: &Polynomial<S>, lo: &S, hi: &S) -> Vec<S> {
    match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => {
            let c = p.coeffs();
            let r = -c[0].clone() / c[1].clone();
            return if *lo < r && r < *hi { vec![r] } else { Vec::new() };
        }
        _ => {}
    }
    let mut knots = vec![lo.clone()];
    knots.extend(roots_in(&p.derivative(), lo, hi));
    knots.push(hi.clone());
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (x0, x1) = (&w[0], &w[1]);
        let (y0, y1) = (p.eval(x0), p.eval(x1));
        if y0.is_zero() {
            if x0 > lo && out.last() != Some(x0) {
                out.push(x0.clone());
            }
            continue;
        }
        if y1.is_zero() {
            if x1 < hi {
                out.push(x1.clone());
            }
            continue;
        }
        if y0.signum() != y1.signum() {
            out.push(bisect(p, x0.clone(), x1.clone(), y0.signum()));
        }
    }
    out
}

fn bisect<S: Scalar>(p: &Polynomial<S>, mut a: S, mut b: S, sign_a: S) -> S {
    let width = S::from_f64_lossy(BISECTION_WIDTH);
    for _ in 0..MAX_BISECTIONS {
        if b.clone() - a.clone() <= width {
            break;
        }
        let mid = (a.clone() + b.clone()).half();
        let y = p.eval(&mid);
        if y.is_zero() {
            return mid;
        }
        if y.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b).half()
}

/// Minimum and maximum of `p` over `[lo, hi]`, attained at an endpoint or a
/// critical point.
pub fn range_on<S: Scalar>(p: &Polynomial<S>, lo: &S, hi: &S) -> (S, S) {
    let mut candidates = vec![lo.clone(), hi.clone()];
    candidates.extend(roots_in(&p.derivative(), lo, hi));
    let mut values = candidates.iter().map(|x| p.eval(x));
    let first = values.next().expect("two endpoints");
    values.fold((first.clone(), first), |(mn, mx), v| (S::min_of(mn, v.clone()), S::max_of(mx, v)))
}
