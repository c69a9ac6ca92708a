//! Montgomery kernel, the generalized Ostrowski bound and its special cases.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::calculus::{delta_integral, integral, integral_sigma, Integrand};
use crate::error::{text, Error, Result};
use crate::function::Function;
use crate::hk::{h2_closed_form, h_k};
use crate::poly::Polynomial;
use crate::roots::range_on;
use crate::scalar::Scalar;
use crate::timescale::{Component, TimeScale};

/// `(a, b, λ, t)` with the split points `a + λ(b-a)/2` and `b - λ(b-a)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelParams<S> {
    pub a: S,
    pub b: S,
    pub lambda: S,
    pub t: S,
    pub split_lo: S,
    pub split_hi: S,
}

fn check_range<S: Scalar>(scale: &TimeScale<S>, a: &S, b: &S) -> Result<(S, S)> {
    let a = scale.snap(a)?;
    let b = scale.snap(b)?;
    if a >= b {
        return Err(Error::DegenerateRange { a: text(&a), b: text(&b) });
    }
    Ok((a, b))
}

fn check_lambda<S: Scalar>(lambda: &S) -> Result<()> {
    if *lambda < S::zero() || *lambda > S::one() {
        return Err(Error::LambdaOutOfRange(text(lambda)));
    }
    Ok(())
}

/// Split points for `λ`, snapped onto the scale when they are members.
pub fn split_points<S: Scalar>(scale: &TimeScale<S>, a: &S, b: &S, lambda: &S) -> (S, S) {
    let offset = lambda.clone() * (b.clone() - a.clone()).half();
    let lo = a.clone() + offset.clone();
    let hi = b.clone() - offset;
    let snap = |x: S| scale.locate(&x).map(|(_, v)| v).unwrap_or(x);
    (snap(lo), snap(hi))
}

impl<S: Scalar> KernelParams<S> {
    pub fn new(scale: &TimeScale<S>, a: &S, b: &S, lambda: &S, t: &S) -> Result<Self> {
        let (a, b) = check_range(scale, a, b)?;
        check_lambda(lambda)?;
        let t = scale.snap(t)?;
        let (split_lo, split_hi) = split_points(scale, &a, &b, lambda);
        let tol = scale.tolerance().clone();
        if t.clone() + tol.clone() < split_lo || t.clone() - tol > split_hi {
            if window_members(scale, &split_lo, &split_hi).is_empty() {
                return Err(Error::EmptyWindow { lo: text(&split_lo), hi: text(&split_hi) });
            }
            return Err(Error::OutsideWindow { t: text(&t), lo: text(&split_lo), hi: text(&split_hi) });
        }
        Ok(KernelParams { a, b, lambda: lambda.clone(), t, split_lo, split_hi })
    }

    pub fn length(&self) -> S {
        self.b.clone() - self.a.clone()
    }
}

/// `[lo, hi] ∩ T`, widened by the scale tolerance.
pub fn window_members<S: Scalar>(scale: &TimeScale<S>, lo: &S, hi: &S) -> Vec<crate::timescale::Cell<S>> {
    let tol = scale.tolerance().clone();
    scale.cells(&(lo.clone() - tol.clone()), &(hi.clone() + tol))
}

/// Montgomery kernel `K(t, s)`.
pub fn kernel<S: Scalar>(p: &KernelParams<S>, s: &S) -> Result<S> {
    if *s < p.a || *s > p.b {
        return Err(Error::KernelArgument { s: text(s), a: text(&p.a), b: text(&p.b) });
    }
    Ok(if *s < p.t { s.clone() - p.split_lo.clone() } else { s.clone() - p.split_hi.clone() })
}

/// `(1-λ) f(t) + λ (f(a) + f(b)) / 2`
fn blended_value<S: Scalar>(f: &Function<S>, p: &KernelParams<S>) -> S {
    (S::one() - p.lambda.clone()) * f.eval(&p.t) + p.lambda.clone() * (f.eval(&p.a) + f.eval(&p.b)).half()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MontgomerySides<S> {
    pub lhs: S,
    pub rhs: S,
    pub residual: S,
}

/// Both sides of the generalized Montgomery identity.
pub fn montgomery_sides<S: Scalar>(
    f: &Function<S>,
    scale: &TimeScale<S>,
    p: &KernelParams<S>,
) -> Result<MontgomerySides<S>> {
    let len = p.length();
    let lhs = blended_value(f, p);
    let mean = integral_sigma(f, scale, &p.a, &p.b)?;
    let fd = Integrand::delta_of(f);
    let left = Integrand::Poly(Polynomial::shifted_identity(p.split_lo.clone())).times(fd.clone());
    let right = Integrand::Poly(Polynomial::shifted_identity(p.split_hi.clone())).times(fd);
    let kernel_term = delta_integral(&left, scale, &p.a, &p.t)? + delta_integral(&right, scale, &p.t, &p.b)?;
    let rhs = (mean + kernel_term) / len;
    Ok(MontgomerySides { residual: lhs.clone() - rhs.clone(), lhs, rhs })
}

/// Range `(min, max)` of `f^Δ` over `[a, b) ∩ T`, closing each continuous
/// segment. These are exactly the points at which `f^Δ` enters `∫_a^b`.
pub fn derivative_range<S: Scalar>(f: &Function<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<(S, S)> {
    let (a, b) = check_range(scale, a, b)?;
    let fprime = f.derivative();
    let comps = scale.components();
    let mut range: Option<(S, S)> = None;
    let mut include = |lo: S, hi: S| {
        range = Some(match range.take() {
            None => (lo, hi),
            Some((mn, mx)) => (S::min_of(mn, lo), S::max_of(mx, hi)),
        });
    };
    for (i, c) in comps.iter().enumerate() {
        if *c.inf() >= b {
            break;
        }
        if *c.sup() < a {
            continue;
        }
        if let Component::Interval { lo, hi } = c {
            let x0 = S::max_of(lo.clone(), a.clone());
            let x1 = S::min_of(hi.clone(), b.clone());
            if x0 < x1 {
                let (mn, mx) = range_on(&fprime, &x0, &x1);
                include(mn, mx);
            }
        }
        let sup = c.sup();
        if *sup >= a && *sup < b {
            let sigma = comps[i + 1].inf();
            let q = (f.eval(sigma) - f.eval(sup)) / (sigma.clone() - sup.clone());
            include(q.clone(), q);
        }
    }
    Ok(range.expect("a < b leaves at least one point or segment"))
}

/// `M = sup |f^Δ|` over `[a, b) ∩ T`.
pub fn m_sup<S: Scalar>(f: &Function<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<S> {
    let (lo, hi) = derivative_range(f, scale, a, b)?;
    Ok(S::max_of(lo.abs(), hi.abs()))
}

/// Requested bound evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    Direct,
    /// Four `h_2` terms: recursive when both split points are on the scale,
    /// otherwise the canonical closed form.
    FourH2,
    /// Four `h_2` terms, always via the closed form of a canonical scale.
    FourH2ClosedForm,
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(BoundMode::Direct),
            "four-h2" => Ok(BoundMode::FourH2),
            "four-h2-closed-form" => Ok(BoundMode::FourH2ClosedForm),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

impl BoundMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundMode::Direct => "direct",
            BoundMode::FourH2 => "four-h2",
            BoundMode::FourH2ClosedForm => "four-h2-closed-form",
        }
    }
}

/// How a report's right-hand side was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMode {
    DirectKernelIntegral,
    FourH2Members,
    FourH2ClosedForm,
    Gruss,
}

impl ReportMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportMode::DirectKernelIntegral => "direct-kernel-integral",
            ReportMode::FourH2Members => "four-h2-members",
            ReportMode::FourH2ClosedForm => "four-h2-closed-form",
            ReportMode::Gruss => "gruss",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialKind {
    /// `λ = 0`, free `t`.
    BohnerMatthews,
    /// `λ = 1`, `t = (a+b)/2`.
    Trapezoid,
    /// `λ = 1/3`, free `t`.
    ThirdFamily,
    /// `λ = 1/3`, `t = (a+b)/2`.
    Simpson,
    /// `λ = 1/2`, free `t`.
    HalfFamily,
    /// `λ = 1/2`, `t = (a+b)/2`.
    Averaged,
    /// `t = (a+b)/2`, free `λ`.
    CenterFamily,
    /// `λ = 0`, `t = (a+b)/2`.
    Midpoint,
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 8] = [
        SpecialKind::BohnerMatthews,
        SpecialKind::Trapezoid,
        SpecialKind::ThirdFamily,
        SpecialKind::Simpson,
        SpecialKind::HalfFamily,
        SpecialKind::Averaged,
        SpecialKind::CenterFamily,
        SpecialKind::Midpoint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpecialKind::BohnerMatthews => "bohner-matthews",
            SpecialKind::Trapezoid => "trapezoid",
            SpecialKind::ThirdFamily => "third-family",
            SpecialKind::Simpson => "simpson",
            SpecialKind::HalfFamily => "half-family",
            SpecialKind::Averaged => "averaged",
            SpecialKind::CenterFamily => "center-family",
            SpecialKind::Midpoint => "midpoint",
        }
    }

    pub fn fixes_lambda(self) -> bool {
        self != SpecialKind::CenterFamily
    }

    /// Whether `t` is pinned to `(a+b)/2`.
    pub fn fixes_t(self) -> bool {
        self.centered()
    }

    /// Pinned `λ`, if the kind fixes one.
    fn lambda<S: Scalar>(self) -> Option<S> {
        let r = |n, d| S::from_int(n) / S::from_int(d);
        match self {
            SpecialKind::BohnerMatthews | SpecialKind::Midpoint => Some(S::zero()),
            SpecialKind::Trapezoid => Some(S::one()),
            SpecialKind::ThirdFamily | SpecialKind::Simpson => Some(r(1, 3)),
            SpecialKind::HalfFamily | SpecialKind::Averaged => Some(r(1, 2)),
            SpecialKind::CenterFamily => None,
        }
    }

    fn centered(self) -> bool {
        matches!(
            self,
            SpecialKind::Trapezoid
                | SpecialKind::Simpson
                | SpecialKind::Averaged
                | SpecialKind::CenterFamily
                | SpecialKind::Midpoint
        )
    }
}

impl FromStr for SpecialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown special case `{s}`")))
    }
}

impl fmt::Display for SpecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<S> {
    pub lhs: S,
    pub rhs: S,
    pub margin: S,
    pub m: S,
    pub mode: ReportMode,
    pub kind: Option<SpecialKind>,
    /// The four `h_2` terms when the bound was assembled from them.
    pub components: Option<[S; 4]>,
    pub sharpness_condition: bool,
    pub equality_case: bool,
    pub tolerance: S,
}

impl<S: Scalar> BoundReport<S> {
    fn assemble(lhs: S, rhs: S, m: S, mode: ReportMode, components: Option<[S; 4]>, sharpness: bool, tol: S) -> Self {
        let equality_case = !rhs.is_zero() && equal_within(&lhs, &rhs);
        BoundReport {
            margin: rhs.clone() - lhs.clone(),
            lhs,
            rhs,
            m,
            mode,
            kind: None,
            components,
            sharpness_condition: sharpness,
            equality_case,
            tolerance: tol,
        }
    }

    /// True when the inequality holds up to `tol` (exactly on rationals).
    pub fn holds(&self, tol: &S) -> bool {
        if S::is_exact() {
            self.margin >= S::zero()
        } else {
            self.margin >= -tol.clone()
        }
    }

    /// Document form; exact numbers as `"p/q"` strings, floats as numbers.
    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "margin": self.margin.to_json(),
            "M": self.m.to_json(),
            "mode": self.mode.as_str(),
            "kind": self.kind.map(|k| k.as_str()),
            "components": self.components.as_ref().map(|c| c.iter().map(|x| x.to_json()).collect::<Vec<_>>()),
            "sharpness_condition": self.sharpness_condition,
            "equality_case": self.equality_case,
            "backend": S::BACKEND.as_str(),
        });
        if !S::is_exact() {
            doc["tolerance"] = self.tolerance.to_json();
        }
        doc
    }
}

/// Exact equality on rationals; relative 1e-12 on floats.
pub fn equal_within<S: Scalar>(x: &S, y: &S) -> bool {
    if S::is_exact() {
        return x == y;
    }
    let scale = S::max_of(x.abs(), y.abs());
    (x.clone() - y.clone()).abs() <= scale * S::from_f64_lossy(1e-12)
}

fn h2_terms<S: Scalar>(scale: &TimeScale<S>, p: &KernelParams<S>, closed_only: bool) -> Result<([S; 4], ReportMode)> {
    let pairs = [(&p.a, &p.split_lo), (&p.t, &p.split_lo), (&p.t, &p.split_hi), (&p.b, &p.split_hi)];
    let members = scale.contains(&p.split_lo) && scale.contains(&p.split_hi);
    if members && !closed_only {
        let mut out = Vec::with_capacity(4);
        for (t, s) in pairs {
            out.push(h_k(scale, 2, t, s)?.value);
        }
        return Ok((out.try_into().expect("four terms"), ReportMode::FourH2Members));
    }
    let family = scale.family().ok_or_else(|| {
        let off = if scale.contains(&p.split_lo) { &p.split_hi } else { &p.split_lo };
        Error::SplitPointOffScale(text(off))
    })?;
    let mut out = Vec::with_capacity(4);
    for (t, s) in pairs {
        out.push(h2_closed_form(&family, t, s)?);
    }
    Ok((out.try_into().expect("four terms"), ReportMode::FourH2ClosedForm))
}

/// `∫_a^b |K(t, s)| Δs`, split at `t`.
pub fn kernel_abs_integral<S: Scalar>(scale: &TimeScale<S>, p: &KernelParams<S>) -> Result<S> {
    Ok(delta_integral(&Integrand::AbsShift(p.split_lo.clone()), scale, &p.a, &p.t)?
        + delta_integral(&Integrand::AbsShift(p.split_hi.clone()), scale, &p.t, &p.b)?)
}

/// The generalized Ostrowski bound for `f` at `(a, b, λ, t)`.
pub fn ostrowski_bound<S: Scalar>(
    f: &Function<S>,
    scale: &TimeScale<S>,
    p: &KernelParams<S>,
    mode: BoundMode,
) -> Result<BoundReport<S>> {
    let len = p.length();
    let mean = integral_sigma(f, scale, &p.a, &p.b)? / len.clone();
    let lhs = (blended_value(f, p) - mean).abs();
    let m = m_sup(f, scale, &p.a, &p.b)?;
    let (sum, report_mode, components) = match mode {
        BoundMode::Direct => (kernel_abs_integral(scale, p)?, ReportMode::DirectKernelIntegral, None),
        BoundMode::FourH2 | BoundMode::FourH2ClosedForm => {
            let (terms, rm) = h2_terms(scale, p, mode == BoundMode::FourH2ClosedForm)?;
            let sum = terms.iter().cloned().fold(S::zero(), |acc, x| acc + x);
            (sum, rm, Some(terms))
        }
    };
    let rhs = m.clone() * sum / len;
    let sharp = sharpness_condition(scale, &p.a, &p.b, &p.lambda).unwrap_or(false);
    Ok(BoundReport::assemble(lhs, rhs, m, report_mode, components, sharp, scale.tolerance().clone()))
}

/// Whether the construction `f = id`, `t = b - λ(b-a)/2` attains equality:
/// `(λ/2) a (b-a) + (λ²/4)(b-a)² ≤ ∫_a^{a+λ(b-a)/2} s Δs`.
pub fn sharpness_condition<S: Scalar>(scale: &TimeScale<S>, a: &S, b: &S, lambda: &S) -> Result<bool> {
    let (a, b) = check_range(scale, a, b)?;
    check_lambda(lambda)?;
    if lambda.is_zero() {
        return Ok(true);
    }
    let (upper, _) = split_points(scale, &a, &b, lambda);
    if !scale.contains(&upper) {
        return Err(Error::SharpnessLimitOffScale(text(&upper)));
    }
    let len = b - a.clone();
    let left = lambda.clone().half() * a.clone() * len.clone()
        + lambda.clone() * lambda.clone() * len.clone() * len / S::from_int(4);
    let right = integral(&Function::identity(), scale, &a, &upper)?;
    Ok(left <= right + scale.tolerance().clone())
}

/// Bounds `γ ≤ f^Δ ≤ Γ` for the Grüss-type estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct GrussParams<S> {
    pub gamma: S,
    pub big_gamma: S,
}

impl<S: Scalar> GrussParams<S> {
    pub fn new(gamma: S, big_gamma: S) -> Result<Self> {
        if gamma > big_gamma {
            return Err(Error::GammaOrder { gamma: text(&gamma), big_gamma: text(&big_gamma) });
        }
        Ok(GrussParams { gamma, big_gamma })
    }

    /// The tightest admissible pair, from the range of `f^Δ` on `[a, b)`.
    pub fn tight(f: &Function<S>, scale: &TimeScale<S>, a: &S, b: &S) -> Result<Self> {
        let (gamma, big_gamma) = derivative_range(f, scale, a, b)?;
        Ok(GrussParams { gamma, big_gamma })
    }
}

/// Ostrowski–Grüss estimate
/// `|f(t) - mean(f^σ) - (f(b)-f(a))/(b-a)² (h_2(t,a) - h_2(t,b))| ≤ (b-a)(Γ-γ)/4`.
pub fn gruss_check<S: Scalar>(
    f: &Function<S>,
    scale: &TimeScale<S>,
    a: &S,
    b: &S,
    t: &S,
    params: &GrussParams<S>,
) -> Result<BoundReport<S>> {
    let (a, b) = check_range(scale, a, b)?;
    let t = scale.snap(t)?;
    if t < a || t > b {
        return Err(Error::OutsideWindow { t: text(&t), lo: text(&a), hi: text(&b) });
    }
    GrussParams::new(params.gamma.clone(), params.big_gamma.clone())?;
    let (lo, hi) = derivative_range(f, scale, &a, &b)?;
    let tol = S::max_of(scale.tolerance().clone(), if S::is_exact() { S::zero() } else { S::from_f64_lossy(1e-9) });
    if lo.clone() + tol.clone() < params.gamma || hi.clone() - tol > params.big_gamma {
        return Err(Error::GrussHypothesis {
            lo: text(&lo),
            hi: text(&hi),
            gamma: text(&params.gamma),
            big_gamma: text(&params.big_gamma),
        });
    }
    let len = b.clone() - a.clone();
    let mean = integral_sigma(f, scale, &a, &b)? / len.clone();
    let slope = (f.eval(&b) - f.eval(&a)) / (len.clone() * len.clone());
    let h_ta = h_k(scale, 2, &t, &a)?.value;
    let h_tb = h_k(scale, 2, &t, &b)?.value;
    let lhs = (f.eval(&t) - mean - slope * (h_ta - h_tb)).abs();
    let rhs = len * (params.big_gamma.clone() - params.gamma.clone()) / S::from_int(4);
    let m = S::max_of(lo.abs(), hi.abs());
    Ok(BoundReport::assemble(lhs, rhs, m, ReportMode::Gruss, None, false, scale.tolerance().clone()))
}

/// One of the named specializations of the general bound. `extra` carries
/// `t` for the free-`t` families and `λ` for the centered family.
pub fn special_case_bound<S: Scalar>(
    kind: SpecialKind,
    f: &Function<S>,
    scale: &TimeScale<S>,
    a: &S,
    b: &S,
    extra: Option<&S>,
    mode: BoundMode,
) -> Result<BoundReport<S>> {
    let (a, b) = check_range(scale, a, b)?;
    let lambda = match (kind.lambda::<S>(), kind) {
        (Some(l), _) => l,
        (None, _) => {
            let l =
                extra.ok_or_else(|| Error::SpecialCaseParameter { kind: kind.to_string(), what: "lambda".into() })?;
            check_lambda(l)?;
            l.clone()
        }
    };
    let t = if kind.centered() {
        let mid = (a.clone() + b.clone()).half();
        scale.snap(&mid).map_err(|_| Error::MidpointOffScale(text(&mid)))?
    } else {
        extra.ok_or_else(|| Error::SpecialCaseParameter { kind: kind.to_string(), what: "t".into() })?.clone()
    };
    let params = KernelParams::new(scale, &a, &b, &lambda, &t)?;
    let mut report = ostrowski_bound(f, scale, &params, mode)?;
    report.kind = Some(kind);
    Ok(report)
}
