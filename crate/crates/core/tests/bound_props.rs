mod common;

use common::{poly_strategy, r, sample_points, scale_strategy};
use num_traits::Signed;
use proptest::prelude::*;
use tscalc_core::{h_k, ostrowski_bound, BoundMode, Function, KernelParams, Rational, TimeScale};

fn range(scale: &TimeScale<Rational>, i: usize, j: usize) -> Option<(Rational, Rational, Rational)> {
    let pts = sample_points(scale);
    let (x, y) = (pts[i % pts.len()].clone(), pts[j % pts.len()].clone());
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    (a < b).then(|| {
        let mid = pts.iter().find(|p| **p >= a && **p <= b).cloned().unwrap();
        (a, b, mid)
    })
}

proptest! {
    #[test]
    fn scaling_multiplies_by_the_absolute_factor(
        scale in scale_strategy(false), f in poly_strategy(), i in 0usize..64, j in 0usize..64, c in -6i64..6,
    ) {
        prop_assume!(c != 0);
        let Some((a, b, t)) = range(&scale, i, j) else { return Ok(()) };
        let p = KernelParams::new(&scale, &a, &b, &r(0, 1), &t).unwrap();
        let c = r(c, 1);
        let base = ostrowski_bound(&f, &scale, &p, BoundMode::Direct).unwrap();
        let scaled = ostrowski_bound(&f.scaled(&c), &scale, &p, BoundMode::Direct).unwrap();
        let k = c.clone() * c.signum();
        prop_assert_eq!(scaled.m, base.m.clone() * k.clone());
        prop_assert_eq!(scaled.lhs, base.lhs.clone() * k.clone());
        prop_assert_eq!(scaled.rhs, base.rhs.clone() * k);
        prop_assert_eq!(scaled.margin.signum(), base.margin.signum());
    }

    #[test]
    fn zero_lambda_reduces_to_two_monomials(
        scale in scale_strategy(false), f in poly_strategy(), i in 0usize..64, j in 0usize..64, k in 0usize..64,
    ) {
        let Some((a, b, _)) = range(&scale, i, j) else { return Ok(()) };
        let inside: Vec<_> = sample_points(&scale).into_iter().filter(|p| *p >= a && *p <= b).collect();
        let t = inside[k % inside.len()].clone();
        let p = KernelParams::new(&scale, &a, &b, &r(0, 1), &t).unwrap();
        let report = ostrowski_bound(&f, &scale, &p, BoundMode::Direct).unwrap();
        let h = h_k(&scale, 2, &t, &a).unwrap().value + h_k(&scale, 2, &t, &b).unwrap().value;
        prop_assert_eq!(report.rhs, report.m / (b - a) * h);
    }

    #[test]
    fn identity_attains_equality_at_the_endpoints(scale in scale_strategy(false), i in 0usize..64, j in 0usize..64) {
        let Some((a, b, _)) = range(&scale, i, j) else { return Ok(()) };
        for t in [&a, &b] {
            let p = KernelParams::new(&scale, &a, &b, &r(0, 1), t).unwrap();
            let report = ostrowski_bound(&Function::identity(), &scale, &p, BoundMode::Direct).unwrap();
            prop_assert_eq!(&report.lhs, &report.rhs);
        }
    }
}
