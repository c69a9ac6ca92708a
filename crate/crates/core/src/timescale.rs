//! Time scales as finite unions of closed intervals and isolated points.

use serde::{Deserialize, Serialize};

use crate::error::{text, Error, Result};
use crate::scalar::{Backend, NumLit, Scalar};

/// Input document describing a time scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<NumLit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentSpec {
    Interval([NumLit; 2]),
    Point(NumLit),
    /// Every integer in `a..=b`.
    Integers {
        a: i64,
        b: i64,
    },
    /// The points `q^k` for `k` in `m..=n`.
    Qlattice {
        q: NumLit,
        m: i64,
        n: i64,
    },
}

impl ScaleSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scale spec: {e}")))
    }

    pub fn integers(a: i64, b: i64, backend: Backend) -> Self {
        ScaleSpec { components: vec![ComponentSpec::Integers { a, b }], backend, tolerance: None }
    }

    pub fn qlattice(q: &str, m: i64, n: i64, backend: Backend) -> Self {
        ScaleSpec { components: vec![ComponentSpec::Qlattice { q: q.into(), m, n }], backend, tolerance: None }
    }

    pub fn interval(lo: &str, hi: &str, backend: Backend) -> Self {
        ScaleSpec { components: vec![ComponentSpec::Interval([lo.into(), hi.into()])], backend, tolerance: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Component<S> {
    Interval { lo: S, hi: S },
    Point(S),
}

impl<S: Scalar> Component<S> {
    pub fn inf(&self) -> &S {
        match self {
            Component::Interval { lo, .. } => lo,
            Component::Point(x) => x,
        }
    }

    pub fn sup(&self) -> &S {
        match self {
            Component::Interval { hi, .. } => hi,
            Component::Point(x) => x,
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, Component::Interval { .. })
    }
}

/// A piece of `T ∩ [lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell<S> {
    Segment { lo: S, hi: S },
    Point(S),
}

impl<S: Scalar> Cell<S> {
    pub fn inf(&self) -> &S {
        match self {
            Cell::Segment { lo, .. } => lo,
            Cell::Point(x) => x,
        }
    }

    pub fn sup(&self) -> &S {
        match self {
            Cell::Segment { hi, .. } => hi,
            Cell::Point(x) => x,
        }
    }
}

/// Canonical scales with known closed forms for the `h_k` monomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Family<S> {
    Reals,
    Integers,
    QLattice(S),
}

impl<S: Scalar> Family<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Reals => "reals",
            Family::Integers => "integers",
            Family::QLattice(_) => "qlattice",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jumps<S> {
    pub sigma: S,
    pub rho: S,
    pub mu: S,
    pub nu: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub right_scattered: bool,
    pub left_scattered: bool,
    pub isolated: bool,
    pub dense: bool,
    pub in_kappa: bool,
}

impl Classification {
    pub fn right_dense(&self) -> bool {
        !self.right_scattered
    }

    pub fn left_dense(&self) -> bool {
        !self.left_scattered
    }
}

/// Ordered, disjoint, nonempty union of closed intervals and isolated points.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeScale<S> {
    components: Vec<Component<S>>,
    tolerance: S,
}

impl<S: Scalar> TimeScale<S> {
    pub fn from_spec(spec: &ScaleSpec) -> Result<Self> {
        if spec.backend != S::BACKEND {
            return Err(Error::Parse(format!(
                "scale spec declares backend `{}` but `{}` was requested",
                spec.backend,
                S::BACKEND
            )));
        }
        let tolerance = match (&spec.tolerance, S::is_exact()) {
            (_, true) => S::zero(),
            (Some(lit), false) => {
                let tol: S = lit.parse()?;
                if tol <= S::zero() {
                    return Err(Error::Parse("float tolerance must be positive".into()));
                }
                tol
            }
            (None, false) => S::default_tolerance(),
        };
        let mut raw = Vec::new();
        for c in &spec.components {
            match c {
                ComponentSpec::Interval([lo, hi]) => raw.push(Component::Interval { lo: lo.parse()?, hi: hi.parse()? }),
                ComponentSpec::Point(x) => raw.push(Component::Point(x.parse()?)),
                ComponentSpec::Integers { a, b } => {
                    if a > b {
                        return Err(Error::InvalidInterval { lo: a.to_string(), hi: b.to_string() });
                    }
                    raw.extend((*a..=*b).map(|k| Component::Point(S::from_int(k))));
                }
                ComponentSpec::Qlattice { q, m, n } => {
                    let qv: S = q.parse()?;
                    if qv <= S::one() || m > n {
                        return Err(Error::InvalidQLattice { q: text(&qv), m: *m, n: *n });
                    }
                    raw.extend((*m..=*n).map(|k| Component::Point(int_pow(&qv, k))));
                }
            }
        }
        Self::new(raw, tolerance)
    }

    /// Normalizes arbitrary components: sorts, joins touching pieces, and
    /// rejects overlaps.
    pub fn new(mut raw: Vec<Component<S>>, tolerance: S) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyScale);
        }
        for c in &raw {
            if let Component::Interval { lo, hi } = c {
                if lo >= hi {
                    return Err(Error::InvalidInterval { lo: text(lo), hi: text(hi) });
                }
            }
        }
        raw.sort_by(|x, y| {
            x.inf()
                .partial_cmp(y.inf())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.sup().partial_cmp(y.sup()).unwrap_or(std::cmp::Ordering::Equal))
        });
        let near = |x: &S, y: &S| (x.clone() - y.clone()).abs() <= tolerance;
        let mut out: Vec<Component<S>> = Vec::with_capacity(raw.len());
        for c in raw {
            let Some(last) = out.last_mut() else {
                out.push(c);
                continue;
            };
            if near(c.inf(), last.sup()) {
                // touching: a shared boundary point
                match (&*last, c) {
                    (Component::Point(_), Component::Point(_)) => {}
                    (Component::Interval { .. }, Component::Point(_)) => {}
                    (Component::Point(_), interval @ Component::Interval { .. }) => *last = interval,
                    (Component::Interval { lo, .. }, Component::Interval { hi, .. }) => {
                        *last = Component::Interval { lo: lo.clone(), hi }
                    }
                }
            } else if c.inf() > last.sup() {
                out.push(c);
            } else {
                return Err(Error::Overlap(format!(
                    "{} overlaps the component ending at {}",
                    describe(&c),
                    last.sup()
                )));
            }
        }
        Ok(TimeScale { components: out, tolerance })
    }

    pub fn components(&self) -> &[Component<S>] {
        &self.components
    }

    pub fn tolerance(&self) -> &S {
        &self.tolerance
    }

    pub fn min(&self) -> &S {
        self.components[0].inf()
    }

    pub fn max(&self) -> &S {
        self.components[self.components.len() - 1].sup()
    }

    pub fn is_discrete(&self) -> bool {
        self.components.iter().all(|c| !c.is_interval())
    }

    fn near(&self, x: &S, y: &S) -> bool {
        (x.clone() - y.clone()).abs() <= self.tolerance
    }

    /// Index of the component holding `x` and the canonical representative
    /// of `x` (snapped onto points and endpoints within tolerance).
    pub fn locate(&self, x: &S) -> Option<(usize, S)> {
        let idx = self.components.partition_point(|c| c.sup().clone() + self.tolerance.clone() < *x);
        let c = self.components.get(idx)?;
        match c {
            Component::Point(p) => self.near(p, x).then(|| (idx, p.clone())),
            Component::Interval { lo, hi } => {
                if self.near(lo, x) {
                    Some((idx, lo.clone()))
                } else if self.near(hi, x) {
                    Some((idx, hi.clone()))
                } else if lo < x && x < hi {
                    Some((idx, x.clone()))
                } else {
                    None
                }
            }
        }
    }

    pub fn contains(&self, x: &S) -> bool {
        self.locate(x).is_some()
    }

    pub fn snap(&self, x: &S) -> Result<S> {
        self.locate(x).map(|(_, v)| v).ok_or_else(|| Error::NotInScale(text(x)))
    }

    pub fn point(&self, x: &S) -> Result<ScalePoint<'_, S>> {
        Ok(ScalePoint { value: self.snap(x)?, scale: self })
    }

    fn sigma_at(&self, idx: usize, t: &S) -> S {
        match &self.components[idx] {
            Component::Interval { hi, .. } if t < hi => t.clone(),
            _ => match self.components.get(idx + 1) {
                Some(next) => next.inf().clone(),
                None => t.clone(),
            },
        }
    }

    fn rho_at(&self, idx: usize, t: &S) -> S {
        match &self.components[idx] {
            Component::Interval { lo, .. } if t > lo => t.clone(),
            _ => match idx.checked_sub(1) {
                Some(prev) => self.components[prev].sup().clone(),
                None => t.clone(),
            },
        }
    }

    pub fn sigma(&self, t: &S) -> Result<S> {
        let (idx, t) = self.locate(t).ok_or_else(|| Error::NotInScale(text(t)))?;
        Ok(self.sigma_at(idx, &t))
    }

    pub fn rho(&self, t: &S) -> Result<S> {
        let (idx, t) = self.locate(t).ok_or_else(|| Error::NotInScale(text(t)))?;
        Ok(self.rho_at(idx, &t))
    }

    pub fn mu(&self, t: &S) -> Result<S> {
        let (idx, t) = self.locate(t).ok_or_else(|| Error::NotInScale(text(t)))?;
        Ok(self.sigma_at(idx, &t) - t)
    }

    pub fn nu(&self, t: &S) -> Result<S> {
        let (idx, t) = self.locate(t).ok_or_else(|| Error::NotInScale(text(t)))?;
        Ok(t.clone() - self.rho_at(idx, &t))
    }

    pub fn jumps(&self, t: &S) -> Result<Jumps<S>> {
        let (idx, t) = self.locate(t).ok_or_else(|| Error::NotInScale(text(t)))?;
        let sigma = self.sigma_at(idx, &t);
        let rho = self.rho_at(idx, &t);
        Ok(Jumps { mu: sigma.clone() - t.clone(), nu: t - rho.clone(), sigma, rho })
    }

    pub fn classify(&self, t: &S) -> Result<Classification> {
        let j = self.jumps(t)?;
        let right_scattered = j.mu > S::zero();
        let left_scattered = j.nu > S::zero();
        let is_max = j.sigma == self.snap(t)? && self.near(&j.sigma, self.max());
        Ok(Classification {
            right_scattered,
            left_scattered,
            isolated: right_scattered && left_scattered,
            dense: !right_scattered && !left_scattered,
            in_kappa: !(is_max && left_scattered),
        })
    }

    /// `T ∩ [lo, hi]` as ordered cells.
    pub fn cells(&self, lo: &S, hi: &S) -> Vec<Cell<S>> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.sup() < lo {
                continue;
            }
            if c.inf() > hi {
                break;
            }
            match c {
                Component::Point(x) => out.push(Cell::Point(x.clone())),
                Component::Interval { lo: clo, hi: chi } => {
                    let a = S::max_of(clo.clone(), lo.clone());
                    let b = S::min_of(chi.clone(), hi.clone());
                    if a < b {
                        out.push(Cell::Segment { lo: a, hi: b });
                    } else if a == b {
                        out.push(Cell::Point(a));
                    }
                }
            }
        }
        out
    }

    /// Recognizes the canonical scales: a single real interval, a unit-step
    /// lattice, or a geometric lattice with ratio `q > 1`.
    pub fn family(&self) -> Option<Family<S>> {
        if let [Component::Interval { .. }] = self.components.as_slice() {
            return Some(Family::Reals);
        }
        if !self.is_discrete() || self.components.len() < 2 {
            return None;
        }
        let pts: Vec<&S> = self.components.iter().map(|c| c.inf()).collect();
        if pts.windows(2).all(|w| self.near(&(w[1].clone() - w[0].clone()), &S::one())) {
            return Some(Family::Integers);
        }
        if *pts[0] <= S::zero() {
            return None;
        }
        let q = pts[1].clone() / pts[0].clone();
        if q <= S::one() {
            return None;
        }
        let geometric = pts.windows(2).all(|w| self.near(&(w[1].clone()), &(w[0].clone() * q.clone())));
        geometric.then_some(Family::QLattice(q))
    }

    /// Serializes to a spec that rebuilds this exact scale.
    pub fn to_spec(&self) -> ScaleSpec {
        ScaleSpec {
            components: self
                .components
                .iter()
                .map(|c| match c {
                    Component::Interval { lo, hi } => {
                        ComponentSpec::Interval([NumLit::from_scalar(lo), NumLit::from_scalar(hi)])
                    }
                    Component::Point(x) => ComponentSpec::Point(NumLit::from_scalar(x)),
                })
                .collect(),
            backend: S::BACKEND,
            tolerance: (!S::is_exact()).then(|| NumLit::from_scalar(&self.tolerance)),
        }
    }
}

fn describe<S: Scalar>(c: &Component<S>) -> String {
    match c {
        Component::Interval { lo, hi } => format!("[{lo}, {hi}]"),
        Component::Point(x) => format!("point {x}"),
    }
}

pub(crate) fn int_pow<S: Scalar>(base: &S, exp: i64) -> S {
    let mut acc = S::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base.clone();
    }
    if exp < 0 {
        S::one() / acc
    } else {
        acc
    }
}

/// A value verified to belong to its scale.
#[derive(Clone, Debug)]
pub struct ScalePoint<'a, S> {
    value: S,
    scale: &'a TimeScale<S>,
}

impl<'a, S: Scalar> ScalePoint<'a, S> {
    pub fn value(&self) -> &S {
        &self.value
    }

    pub fn scale(&self) -> &'a TimeScale<S> {
        self.scale
    }

    pub fn jumps(&self) -> Jumps<S> {
        self.scale.jumps(&self.value).expect("membership checked at construction")
    }

    pub fn classify(&self) -> Classification {
        self.scale.classify(&self.value).expect("membership checked at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    fn build(json: &str) -> Result<TimeScale<Rational>> {
        TimeScale::from_spec(&ScaleSpec::from_json(json).unwrap())
    }

    #[test]
    fn integer_family_expands() {
        let t = build(r#"{"components":[{"integers":{"a":0,"b":10}}],"backend":"rational"}"#).unwrap();
        assert_eq!(t.components().len(), 11);
        assert_eq!(*t.min(), q(0));
        assert_eq!(*t.max(), q(10));
        assert_eq!(t.family(), Some(Family::Integers));
    }

    #[test]
    fn qlattice_expands() {
        let t = build(r#"{"components":[{"qlattice":{"q":"2","m":0,"n":3}}],"backend":"rational"}"#).unwrap();
        let pts: Vec<_> = t.components().iter().map(|c| c.inf().clone()).collect();
        assert_eq!(pts, vec![q(1), q(2), q(4), q(8)]);
        assert_eq!(t.family(), Some(Family::QLattice(q(2))));
    }

    #[test]
    fn hybrid_normalizes() {
        let t = build(r#"{"components":[{"point":"2"},{"interval":["0","1"]}],"backend":"rational"}"#).unwrap();
        assert_eq!(t.components().len(), 2);
        assert_eq!(*t.min(), q(0));
        assert_eq!(*t.max(), q(2));
        assert_eq!(t.family(), None);
    }

    #[test]
    fn build_errors() {
        assert_eq!(build(r#"{"components":[],"backend":"rational"}"#), Err(Error::EmptyScale));
        assert!(matches!(
            build(r#"{"components":[{"interval":["0","2"]},{"interval":["1","3"]}],"backend":"rational"}"#),
            Err(Error::Overlap(_))
        ));
        assert!(matches!(
            build(r#"{"components":[{"interval":["0","2"]},{"point":"1"}],"backend":"rational"}"#),
            Err(Error::Overlap(_))
        ));
        assert!(matches!(
            build(r#"{"components":[{"qlattice":{"q":"1","m":0,"n":3}}],"backend":"rational"}"#),
            Err(Error::InvalidQLattice { .. })
        ));
        assert!(matches!(
            build(r#"{"components":[{"qlattice":{"q":"1/2","m":0,"n":3}}],"backend":"rational"}"#),
            Err(Error::InvalidQLattice { .. })
        ));
        assert!(matches!(
            build(r#"{"components":[{"interval":["1","1"]}],"backend":"rational"}"#),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(build(r#"{"components":[{"interval":["0","1"]}],"backend":"float"}"#).is_err());
    }

    #[test]
    fn touching_components_merge() {
        let t = build(
            r#"{"components":[{"interval":["0","1"]},{"interval":["1","2"]},{"point":"2"},{"point":"5"},{"point":"5"}],"backend":"rational"}"#,
        )
        .unwrap();
        assert_eq!(t.components(), &[Component::Interval { lo: q(0), hi: q(2) }, Component::Point(q(5))]);
    }

    #[test]
    fn jumps_on_integers() {
        let t = TimeScale::<Rational>::from_spec(&ScaleSpec::integers(0, 10, Backend::Rational)).unwrap();
        let j = t.jumps(&q(3)).unwrap();
        assert_eq!(j, Jumps { sigma: q(4), rho: q(2), mu: q(1), nu: q(1) });
        let j = t.jumps(&q(10)).unwrap();
        assert_eq!((j.sigma, j.mu), (q(10), q(0)));
        let j = t.jumps(&q(0)).unwrap();
        assert_eq!((j.rho, j.nu), (q(0), q(0)));
        assert_eq!(t.jumps(&ratio(1, 2)), Err(Error::NotInScale("1/2".into())));
    }

    #[test]
    fn jumps_on_hybrid() {
        let t = build(r#"{"components":[{"interval":["0","1"]},{"point":"2"}],"backend":"rational"}"#).unwrap();
        let j = t.jumps(&q(1)).unwrap();
        assert_eq!((j.sigma, j.mu), (q(2), q(1)));
        let j = t.jumps(&ratio(1, 2)).unwrap();
        assert_eq!((j.sigma, j.mu), (ratio(1, 2), q(0)));
        let j = t.jumps(&q(2)).unwrap();
        assert_eq!((j.rho, j.nu), (q(1), q(1)));
    }

    #[test]
    fn jumps_on_qlattice() {
        let t = TimeScale::<Rational>::from_spec(&ScaleSpec::qlattice("2", 0, 3, Backend::Rational)).unwrap();
        let j = t.jumps(&q(2)).unwrap();
        assert_eq!(j, Jumps { sigma: q(4), rho: q(1), mu: q(2), nu: q(1) });
    }

    #[test]
    fn classification() {
        let t = build(r#"{"components":[{"interval":["0","1"]},{"point":"2"}],"backend":"rational"}"#).unwrap();
        let c = t.classify(&q(1)).unwrap();
        assert!(c.left_dense() && c.right_scattered && c.in_kappa);
        let c = t.classify(&q(2)).unwrap();
        assert!(c.left_scattered && !c.in_kappa);
        let c = t.classify(&q(0)).unwrap();
        assert!(c.right_dense() && c.left_dense());

        let r = build(r#"{"components":[{"interval":["0","1"]}],"backend":"rational"}"#).unwrap();
        let c = r.classify(&ratio(1, 2)).unwrap();
        assert!(c.dense && c.in_kappa);
        // the maximum of an interval is left-dense, so it stays in T^kappa
        assert!(r.classify(&q(1)).unwrap().in_kappa);
        let z = TimeScale::<Rational>::from_spec(&ScaleSpec::integers(0, 3, Backend::Rational)).unwrap();
        let c = z.classify(&q(1)).unwrap();
        assert!(c.isolated && !c.dense);
    }

    #[test]
    fn float_membership_snaps_within_tolerance() {
        let spec = ScaleSpec::integers(0, 3, Backend::Float);
        let t = TimeScale::<f64>::from_spec(&spec).unwrap();
        let (_, v) = t.locate(&(1.0 + 1e-14)).unwrap();
        assert_eq!(v, 1.0);
        assert!(!t.contains(&1.5));
        assert_eq!(t.sigma(&(0.1 + 0.2 + 0.7)).unwrap(), 2.0);
    }

    #[test]
    fn cells_clip_to_range() {
        let t = build(
            r#"{"components":[{"interval":["0","1"]},{"point":"2"},{"interval":["3","5"]}],"backend":"rational"}"#,
        )
        .unwrap();
        let cells = t.cells(&ratio(1, 2), &q(3));
        assert_eq!(cells, vec![Cell::Segment { lo: ratio(1, 2), hi: q(1) }, Cell::Point(q(2)), Cell::Point(q(3)),]);
    }

    #[test]
    fn spec_round_trip() {
        let t = build(r#"{"components":[{"interval":["0","1/2"]},{"integers":{"a":1,"b":3}}],"backend":"rational"}"#)
            .unwrap();
        let again = TimeScale::<Rational>::from_spec(&t.to_spec()).unwrap();
        assert_eq!(t, again);
    }
}
