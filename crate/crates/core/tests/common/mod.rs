#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use tscalc_core::timescale::Component;
use tscalc_core::{Function, Rational, TimeScale};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds increasing components from `(is_interval, gap, length)` triples,
/// with halves as the unit.
pub fn build(start: i64, items: &[(bool, i64, i64)]) -> TimeScale<Rational> {
    let mut x = r(start, 1);
    let mut comps = Vec::new();
    for (interval, gap, len) in items {
        if *interval {
            let hi = x.clone() + r(*len, 2);
            comps.push(Component::Interval { lo: x.clone(), hi: hi.clone() });
            x = hi;
        } else {
            comps.push(Component::Point(x.clone()));
        }
        x += r(*gap, 2);
    }
    TimeScale::new(comps, Rational::from_integer(0.into())).unwrap()
}

pub fn scale_strategy(discrete: bool) -> impl Strategy<Value = TimeScale<Rational>> {
    let item = (any::<bool>(), 1i64..6, 1i64..6).prop_map(move |(i, g, l)| (i && !discrete, g, l));
    (-6i64..6, prop::collection::vec(item, 3..10)).prop_map(|(s, items)| build(s, &items))
}

pub fn poly_strategy() -> impl Strategy<Value = Function<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..5)
        .prop_map(|cs| Function::polynomial(cs.into_iter().map(|(n, d)| r(n, d)).collect()))
}

/// Points at the boundaries and a few interior grid points of every component.
pub fn sample_points(scale: &TimeScale<Rational>) -> Vec<Rational> {
    let mut out = Vec::new();
    for c in scale.components() {
        match c {
            Component::Point(x) => out.push(x.clone()),
            Component::Interval { lo, hi } => {
                for k in 0..=4 {
                    out.push(lo.clone() + (hi.clone() - lo.clone()) * r(k, 4));
                }
            }
        }
    }
    out
}
