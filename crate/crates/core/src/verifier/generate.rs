//! Seeded case generation.
//!
//! Cases are always drawn over exact rationals and converted to the target
//! backend afterwards, so a float run and a rational run with the same seed
//! see the same mathematical inputs.

use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ScaleFamily, SuiteConfig};
use crate::error::Result;
use crate::function::{Function, FunctionSpec};
use crate::ostrowski::split_points;
use crate::scalar::{ratio, NumLit, Rational, Scalar};
use crate::timescale::{Cell, Component, ScaleSpec, TimeScale};

/// Redraws allowed when the admissible window misses the scale.
pub const MAX_REDRAWS: usize = 16;

pub const LAMBDA_GRID: [(i64, i64); 6] = [(0, 1), (1, 4), (1, 3), (1, 2), (3, 4), (1, 1)];

const Q_CHOICES: [(i64, i64); 3] = [(3, 2), (2, 1), (3, 1)];

/// Independent stream for case `index`: one ChaCha stream per index, so the
/// draw does not depend on evaluation order.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A fully materialized case.
#[derive(Clone, Debug)]
pub struct CaseInput<S> {
    pub scale: TimeScale<S>,
    pub f: Function<S>,
    pub g: Option<Function<S>>,
    pub a: S,
    pub b: S,
    pub lambda: S,
    pub t: S,
    /// Auxiliary point: the additivity split, or the second `h_2` argument.
    pub c: Option<S>,
    pub weights: Option<(S, S)>,
}

/// Replayable, serializable form of a [`CaseInput`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub scale: ScaleSpec,
    pub f: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FunctionSpec>,
    pub a: NumLit,
    pub b: NumLit,
    pub lambda: NumLit,
    pub t: NumLit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<NumLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[NumLit; 2]>,
}

impl<S: Scalar> CaseInput<S> {
    pub fn record(&self) -> CaseRecord {
        CaseRecord {
            scale: self.scale.to_spec(),
            f: self.f.to_spec(),
            g: self.g.as_ref().map(|g| g.to_spec()),
            a: NumLit::from_scalar(&self.a),
            b: NumLit::from_scalar(&self.b),
            lambda: NumLit::from_scalar(&self.lambda),
            t: NumLit::from_scalar(&self.t),
            c: self.c.as_ref().map(NumLit::from_scalar),
            weights: self.weights.as_ref().map(|(x, y)| [NumLit::from_scalar(x), NumLit::from_scalar(y)]),
        }
    }

    pub fn from_record(r: &CaseRecord) -> Result<Self> {
        let weights = match &r.weights {
            Some([x, y]) => Some((x.parse()?, y.parse()?)),
            None => None,
        };
        Ok(CaseInput {
            scale: TimeScale::from_spec(&r.scale)?,
            f: Function::from_spec(&r.f)?,
            g: r.g.as_ref().map(Function::from_spec).transpose()?,
            a: r.a.parse()?,
            b: r.b.parse()?,
            lambda: r.lambda.parse()?,
            t: r.t.parse()?,
            c: r.c.as_ref().map(|c| c.parse()).transpose()?,
            weights,
        })
    }
}

impl CaseInput<Rational> {
    /// Moves the case to another backend.
    pub fn convert<S: Scalar>(&self) -> Result<CaseInput<S>> {
        let cv = |x: &Rational| S::from_rational(x);
        let fv = |f: &Function<Rational>| match f.kind() {
            crate::function::FunctionKind::Identity => Function::identity(),
            crate::function::FunctionKind::Constant => Function::constant(cv(&f.eval(&Rational::zero()))),
            crate::function::FunctionKind::Polynomial => Function::from_poly(f.poly().map(cv)),
        };
        let components = self
            .scale
            .components()
            .iter()
            .map(|c| match c {
                Component::Interval { lo, hi } => Component::Interval { lo: cv(lo), hi: cv(hi) },
                Component::Point(x) => Component::Point(cv(x)),
            })
            .collect();
        Ok(CaseInput {
            scale: TimeScale::new(components, S::default_tolerance())?,
            f: fv(&self.f),
            g: self.g.as_ref().map(fv),
            a: cv(&self.a),
            b: cv(&self.b),
            lambda: cv(&self.lambda),
            t: cv(&self.t),
            c: self.c.as_ref().map(cv),
            weights: self.weights.as_ref().map(|(x, y)| (cv(x), cv(y))),
        })
    }
}

pub(crate) fn pick<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items.choose(rng).expect("nonempty choice").clone()
}

fn random_ratio(rng: &mut ChaCha8Rng, num: i64, dens: &[i64]) -> Rational {
    let d = pick(rng, dens);
    ratio(rng.random_range(-num * d..=num * d), d)
}

fn positive_ratio(rng: &mut ChaCha8Rng, choices: &[(i64, i64)]) -> Rational {
    let (n, d) = pick(rng, choices);
    ratio(n, d)
}

const GAPS: [(i64, i64); 8] = [(1, 3), (1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1), (4, 1)];
const LENGTHS: [(i64, i64); 6] = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (5, 1)];

/// Random polynomial of degree at most `max_degree`; identity and constants
/// appear with small probability.
pub fn random_function(rng: &mut ChaCha8Rng, max_degree: usize) -> Function<Rational> {
    match rng.random_range(0..20) {
        0 => Function::identity(),
        1 => Function::constant(random_ratio(rng, 9, &[1, 2, 3])),
        _ => {
            let degree = rng.random_range(1..=max_degree.max(1));
            let mut coeffs: Vec<Rational> = (0..=degree).map(|_| random_ratio(rng, 9, &[1, 1, 2, 3, 4, 5])).collect();
            if coeffs[degree].is_zero() {
                coeffs[degree] = Rational::one();
            }
            Function::polynomial(coeffs)
        }
    }
}

pub fn random_lambda(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Rational> {
    if let Some(l) = &config.fixed_lambda {
        return crate::scalar::parse_rational(l);
    }
    if config.lambda_grid_only || rng.random_bool(0.5) {
        let (n, d) = pick(rng, &LAMBDA_GRID);
        return Ok(ratio(n, d));
    }
    Ok(ratio(rng.random_range(0..=60), 60))
}

fn points(xs: impl IntoIterator<Item = Rational>) -> Vec<Component<Rational>> {
    xs.into_iter().map(Component::Point).collect()
}

pub fn integer_slice(rng: &mut ChaCha8Rng, config: &SuiteConfig, start: Option<i64>) -> TimeScale<Rational> {
    let a0 = start.unwrap_or_else(|| rng.random_range(-10..=10));
    let n = rng.random_range(2..=(config.max_points as i64 - 1));
    TimeScale::new(points((a0..=a0 + n).map(|k| ratio(k, 1))), Rational::zero()).expect("distinct points")
}

/// `{q^m, ..., q^n}` with `q ∈ {3/2, 2, 3}`, `m ≤ 2` and `n - m ≤ 8`.
pub fn q_lattice(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> TimeScale<Rational> {
    let (qn, qd) = pick(rng, &Q_CHOICES);
    let q = ratio(qn, qd);
    let m = rng.random_range(0..=2);
    let span = (config.max_points as i64 - 1).min(8);
    let n = m + rng.random_range(2..=span);
    let pts: Vec<Rational> = (m..=n).map(|k| crate::timescale::int_pow(&q, k)).collect();
    TimeScale::new(points(pts), Rational::zero()).expect("distinct points")
}

pub fn real_interval(rng: &mut ChaCha8Rng) -> TimeScale<Rational> {
    let lo = random_ratio(rng, 10, &[1, 2, 3, 4]);
    let len = ratio(rng.random_range(1..=40), pick(rng, &[1, 2, 4]));
    TimeScale::new(vec![Component::Interval { lo: lo.clone(), hi: lo + len }], Rational::zero())
        .expect("positive length")
}

/// At least one interval and one isolated point.
pub fn hybrid(rng: &mut ChaCha8Rng) -> TimeScale<Rational> {
    let count = rng.random_range(2..=5);
    let mut kinds: Vec<bool> = (0..count).map(|_| rng.random_bool(0.5)).collect();
    if !kinds.iter().any(|&k| k) {
        kinds[rng.random_range(0..count)] = true;
    }
    if kinds.iter().all(|&k| k) {
        let i = rng.random_range(0..count);
        kinds[i] = false;
    }
    let mut x = ratio(rng.random_range(-5..=5), 1);
    let mut comps = Vec::with_capacity(count);
    for interval in kinds {
        if interval {
            let hi = x.clone() + positive_ratio(rng, &LENGTHS);
            comps.push(Component::Interval { lo: x.clone(), hi: hi.clone() });
            x = hi;
        } else {
            comps.push(Component::Point(x.clone()));
        }
        x += positive_ratio(rng, &GAPS);
    }
    TimeScale::new(comps, Rational::zero()).expect("increasing components")
}

/// Irregularly spaced isolated points.
pub fn hybrid_discrete(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> TimeScale<Rational> {
    let count = rng.random_range(3..=config.max_points.min(24));
    let mut x = ratio(rng.random_range(-5..=5), 1);
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        pts.push(x.clone());
        x += positive_ratio(rng, &GAPS);
    }
    TimeScale::new(points(pts), Rational::zero()).expect("increasing points")
}

/// Points symmetric about their center, so every split pair
/// `(a + d, b - d)` with `a + d` a point is a pair of points.
pub fn mirrored_discrete(rng: &mut ChaCha8Rng, config: &SuiteConfig, unit_gaps: bool) -> TimeScale<Rational> {
    let half = rng.random_range(1..=((config.max_points - 1) / 2).min(12));
    let gaps: Vec<Rational> =
        (0..half).map(|_| if unit_gaps { Rational::one() } else { positive_ratio(rng, &GAPS) }).collect();
    let room = 2 * half + 2 <= config.max_points;
    let center_gap = if room && rng.random_bool(0.5) { Some(positive_ratio(rng, &GAPS)) } else { None };
    let mut left = vec![ratio(rng.random_range(-5..=5), 1)];
    for g in &gaps {
        let next = left.last().expect("seeded") + g;
        left.push(next);
    }
    let pivot = left.last().expect("seeded").clone();
    let center = match &center_gap {
        Some(g) => pivot.clone() + g.clone() / ratio(2, 1),
        None => pivot.clone(),
    };
    let mut pts = left.clone();
    for x in left.iter().rev() {
        let mirror = center.clone() * ratio(2, 1) - x.clone();
        if mirror > pivot {
            pts.push(mirror);
        }
    }
    TimeScale::new(points(pts), Rational::zero()).expect("increasing points")
}

pub fn random_scale(rng: &mut ChaCha8Rng, family: ScaleFamily, config: &SuiteConfig) -> TimeScale<Rational> {
    match family {
        ScaleFamily::IntegerSlice => integer_slice(rng, config, None),
        ScaleFamily::QLattice => q_lattice(rng, config),
        ScaleFamily::RealInterval => real_interval(rng),
        ScaleFamily::Hybrid => hybrid(rng),
        ScaleFamily::HybridDiscrete => hybrid_discrete(rng, config),
    }
}

/// A point of `[lo, hi] ∩ T`, uniform over the cells and over a 12-step grid
/// inside each segment.
pub fn member(rng: &mut ChaCha8Rng, scale: &TimeScale<Rational>, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let cells = scale.cells(lo, hi);
    let cell = cells.choose(rng)?;
    Some(match cell {
        Cell::Point(x) => x.clone(),
        Cell::Segment { lo, hi } => {
            let k = rng.random_range(0..=12);
            lo.clone() + (hi.clone() - lo.clone()) * ratio(k, 12)
        }
    })
}

/// `[a, b] ∩ T` holds a segment of positive length or at least three points.
fn substantial(scale: &TimeScale<Rational>, a: &Rational, b: &Rational) -> bool {
    let cells = scale.cells(a, b);
    cells.len() >= 3 || cells.iter().any(|c| matches!(c, Cell::Segment { .. }))
}

/// `a < b` in `T` with a substantial range between them.
pub fn endpoints(rng: &mut ChaCha8Rng, scale: &TimeScale<Rational>) -> Option<(Rational, Rational)> {
    if rng.random_bool(0.5) {
        return Some((scale.min().clone(), scale.max().clone()));
    }
    if scale.is_discrete() {
        let pts: Vec<&Rational> = scale.components().iter().map(|c| c.inf()).collect();
        if pts.len() < 3 {
            return None;
        }
        let i = rng.random_range(0..pts.len() - 2);
        let j = rng.random_range(i + 2..pts.len());
        return Some((pts[i].clone(), pts[j].clone()));
    }
    for _ in 0..MAX_REDRAWS {
        let x = member(rng, scale, scale.min(), scale.max())?;
        let y = member(rng, scale, scale.min(), scale.max())?;
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        if substantial(scale, &x, &y) {
            return Some((x, y));
        }
    }
    None
}

/// Ostrowski case over one of the configured families: scale, `f`, `[a, b]`,
/// `λ` and `t` drawn from the admissible window. `None` when every redraw
/// produced an empty window.
pub fn generate_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    config.validate()?;
    for _ in 0..MAX_REDRAWS {
        let family = pick(rng, &config.families);
        let scale = random_scale(rng, family, config);
        let Some((a, b)) = endpoints(rng, &scale) else { continue };
        let lambda = random_lambda(rng, config)?;
        let (lo, hi) = split_points(&scale, &a, &b, &lambda);
        let Some(t) = member(rng, &scale, &lo, &hi) else { continue };
        let f = random_function(rng, config.poly_degree_max);
        return Ok(Some(CaseInput { scale, f, g: None, a, b, lambda, t, c: None, weights: None }));
    }
    Ok(None)
}
