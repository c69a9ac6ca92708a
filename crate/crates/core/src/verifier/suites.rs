//! Case generation and checking for each named property.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::generate::{
    endpoints, generate_case, integer_slice, member, mirrored_discrete, pick, q_lattice, random_function,
    random_lambda, random_scale, real_interval, CaseInput, MAX_REDRAWS,
};
use super::oracle::{continuous_rhs, integer_rhs, oracle_integral, quantum_terms};
use super::{Outcome, ScaleFamily, SuiteConfig, SuiteName};
use crate::calculus::{delta_integral, Integrand};
use crate::error::{Error, Result};
use crate::function::Function;
use crate::hk::{h2_closed_form, h_k};
use crate::ostrowski::{
    gruss_check, montgomery_sides, ostrowski_bound, sharpness_condition, split_points, BoundMode, GrussParams,
    KernelParams, ReportMode,
};
use crate::poly::Polynomial;
use crate::scalar::{ratio, Rational, Scalar};
use crate::timescale::Family;

pub(super) fn generate(
    name: SuiteName,
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
) -> Result<Option<CaseInput<Rational>>> {
    match name {
        SuiteName::Identity | SuiteName::Inequality => generate_case(rng, config),
        SuiteName::Gruss => gruss_case(rng, config),
        SuiteName::Sharpness => sharpness_case(rng, config),
        SuiteName::CalculusRules => rules_case(rng, config),
        SuiteName::ClosedForms => closed_form_case(rng, config),
        SuiteName::ModeAgreement => mirrored_case(rng, config),
    }
}

/// Engine errors on a generated case are violations, not aborts.
pub(super) fn check<S: Scalar>(name: SuiteName, case: &CaseInput<S>, config: &SuiteConfig) -> Result<Outcome<S>> {
    let tol = Tol::new(config);
    let run = match name {
        SuiteName::Identity => check_identity(case, &tol),
        SuiteName::Inequality => check_inequality(case, &tol),
        SuiteName::CalculusRules => check_rules(case, &tol),
        SuiteName::ClosedForms => check_closed_forms(case, &tol),
        SuiteName::Sharpness => check_sharpness(case, &tol),
        SuiteName::Gruss => check_gruss(case, &tol),
        SuiteName::ModeAgreement => check_modes(case, &tol),
    };
    Ok(run.unwrap_or_else(|e| {
        let mut o = Outcome::new();
        o.failure = Some(format!("engine error: {e}"));
        o
    }))
}

struct Tol {
    identity: f64,
    inequality: f64,
    closed_form: f64,
}

impl Tol {
    fn new(c: &SuiteConfig) -> Self {
        Tol {
            identity: c.tolerances.identity,
            inequality: c.tolerances.inequality,
            closed_form: c.tolerances.closed_form,
        }
    }
}

/// Two-sided comparison: exact on rationals, `tol` relative to `mag`
/// (at least 1) on floats.
fn close<S: Scalar>(x: &S, y: &S, tol: f64, mag: &S) -> bool {
    if S::is_exact() {
        return x == y;
    }
    (x.clone() - y.clone()).abs() <= S::from_f64_lossy(tol) * S::max_of(S::one(), mag.clone())
}

/// One-sided: `margin ≥ 0` exactly, or `≥ -tol·mag` on floats.
fn nonnegative<S: Scalar>(margin: &S, tol: f64, mag: &S) -> bool {
    if S::is_exact() {
        return *margin >= S::zero();
    }
    *margin >= -(S::from_f64_lossy(tol) * S::max_of(S::one(), mag.clone()))
}

/// Size of the terms that enter the computation, so float tolerances scale
/// with the inputs: `max(Σ|c_k|X^k, (b-a)Σk|c_k|X^(k-1))`, `X = max(|a|, |b|, 1)`.
fn magnitude<S: Scalar>(f: &Function<S>, a: &S, b: &S) -> S {
    let x = S::max_of(S::one(), S::max_of(a.abs(), b.abs()));
    let abs = Polynomial::new(f.poly().coeffs().iter().map(|c| c.abs()).collect());
    let value = abs.eval(&x);
    let slope = abs.derivative().eval(&x) * (b.clone() - a.clone());
    S::max_of(value, slope)
}

fn worst<S: Scalar>(slot: &mut Option<S>, x: S) {
    *slot = Some(match slot.take() {
        Some(y) => S::max_of(y, x),
        None => x,
    });
}

fn fail<S: Scalar>(o: &mut Outcome<S>, msg: String) {
    if o.failure.is_none() {
        o.failure = Some(msg);
    }
}

fn params<S: Scalar>(case: &CaseInput<S>) -> Result<KernelParams<S>> {
    KernelParams::new(&case.scale, &case.a, &case.b, &case.lambda, &case.t)
}

fn check_identity<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let p = params(case)?;
    let sides = montgomery_sides(&case.f, &case.scale, &p)?;
    let mag = magnitude(&case.f, &case.a, &case.b);
    let mut o = Outcome::new();
    o.residual = Some(sides.residual.abs());
    if !close(&sides.lhs, &sides.rhs, tol.identity, &mag) {
        fail(&mut o, format!("identity residual {} (lhs {}, rhs {})", sides.residual, sides.lhs, sides.rhs));
    }
    Ok(o)
}

fn check_inequality<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let p = params(case)?;
    let report = ostrowski_bound(&case.f, &case.scale, &p, BoundMode::Direct)?;
    let mag = magnitude(&case.f, &case.a, &case.b);
    let mut o = Outcome::new();
    o.margin = Some(report.margin.clone());
    if !nonnegative(&report.margin, tol.inequality, &mag) {
        fail(&mut o, format!("bound violated: lhs {} > rhs {}", report.lhs, report.rhs));
    }
    // the kernel mass against the enumeration oracle
    let eps = S::from_f64_lossy(tol.identity * 1e-2);
    let left = oracle_integral(&Integrand::AbsShift(p.split_lo.clone()), &case.scale, &p.a, &p.t, &eps)?;
    let right = oracle_integral(&Integrand::AbsShift(p.split_hi.clone()), &case.scale, &p.t, &p.b, &eps)?;
    let oracle = report.m.clone() * (left + right) / p.length();
    o.residual = Some((oracle.clone() - report.rhs.clone()).abs());
    if !close(&oracle, &report.rhs, tol.identity, &(report.m.clone() * p.length())) {
        fail(&mut o, format!("direct rhs {} disagrees with oracle {}", report.rhs, oracle));
    }
    if report.equality_case {
        o.tallies.push("equality-observed");
    }
    Ok(o)
}

fn rules_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    for _ in 0..MAX_REDRAWS {
        let family = pick(rng, &config.families);
        let scale = random_scale(rng, family, config);
        let Some((a, b)) = endpoints(rng, &scale) else { continue };
        let Some(c) = member(rng, &scale, &a, &b) else { continue };
        let f = random_function(rng, config.poly_degree_max);
        let g = random_function(rng, config.poly_degree_max);
        let w = |rng: &mut ChaCha8Rng| ratio(rng.random_range(-12..=12), rng.random_range(1..=6));
        let weights = (w(rng), w(rng));
        return Ok(Some(CaseInput {
            scale,
            f,
            g: Some(g),
            t: a.clone(),
            a,
            b,
            lambda: Rational::zero(),
            c: Some(c),
            weights: Some(weights),
        }));
    }
    Ok(None)
}

fn check_rules<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let (scale, a, b) = (&case.scale, &case.a, &case.b);
    let missing = || Error::Config("calculus-rules case needs g, c and weights".into());
    let g = case.g.as_ref().ok_or_else(missing)?;
    let c = case.c.as_ref().ok_or_else(missing)?;
    let (alpha, beta) = case.weights.as_ref().ok_or_else(missing)?;
    let (fp, gp) = (case.f.poly(), g.poly());
    let int = |h: &Integrand<S>, x: &S, y: &S| delta_integral(h, scale, x, y);
    let of = |p: &Polynomial<S>| Integrand::Poly(p.clone());
    let mag = S::max_of(magnitude(&case.f, a, b), magnitude(g, a, b));
    let mag = mag.clone() * mag * (b.clone() - a.clone() + S::one());
    let eps = S::from_f64_lossy(tol.identity * 1e-2);

    let mut o = Outcome::new();
    let compare = |o: &mut Outcome<S>, rule: &str, x: S, y: S| {
        worst(&mut o.residual, (x.clone() - y.clone()).abs());
        if !close(&x, &y, tol.identity, &mag) {
            fail(o, format!("{rule}: {x} != {y}"));
        }
    };

    let combo = &fp.scale(alpha) + &gp.scale(beta);
    compare(
        &mut o,
        "linearity",
        int(&of(&combo), a, b)?,
        alpha.clone() * int(&of(fp), a, b)? + beta.clone() * int(&of(gp), a, b)?,
    );
    compare(&mut o, "reversal", int(&of(fp), a, b)?, -int(&of(fp), b, a)?);
    compare(&mut o, "additivity", int(&of(fp), a, b)?, int(&of(fp), a, c)? + int(&of(fp), c, b)?);
    let fg = fp * gp;
    compare(
        &mut o,
        "integration by parts",
        int(&of(fp).times(Integrand::Delta(gp.clone())), a, b)?,
        fg.eval(b) - fg.eval(a) - int(&Integrand::Delta(fp.clone()).times(Integrand::Sigma(gp.clone())), a, b)?,
    );
    compare(&mut o, "empty range", int(&of(fp), a, a)?, S::zero());
    let id = Polynomial::identity();
    compare(
        &mut o,
        "sigma identity",
        int(&Integrand::Sigma(id.clone()), a, b)?,
        b.clone() * b.clone() - a.clone() * a.clone() - int(&of(&id), a, b)?,
    );
    compare(&mut o, "fundamental theorem", int(&Integrand::Delta(fp.clone()), a, b)?, fp.eval(b) - fp.eval(a));

    let checks = [
        of(fp),
        Integrand::Sigma(gp.clone()),
        of(fp).times(Integrand::Delta(gp.clone())),
        Integrand::AbsShift(c.clone()).times(of(gp)),
    ];
    for h in &checks {
        compare(&mut o, "oracle agreement", int(h, a, b)?, oracle_integral(h, scale, a, b, &eps)?);
    }
    Ok(o)
}

fn canonical(config: &SuiteConfig) -> Result<Vec<ScaleFamily>> {
    let fams: Vec<ScaleFamily> = config
        .families
        .iter()
        .copied()
        .filter(|f| matches!(f, ScaleFamily::IntegerSlice | ScaleFamily::QLattice | ScaleFamily::RealInterval))
        .collect();
    if fams.is_empty() {
        return Err(Error::Config(
            "closed-forms needs integer-slice, q-lattice or real-interval among the families".into(),
        ));
    }
    Ok(fams)
}

fn closed_form_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    let families = canonical(config)?;
    for _ in 0..MAX_REDRAWS {
        let family = pick(rng, &families);
        let (scale, a, b, lambda) = match family {
            ScaleFamily::IntegerSlice => {
                let scale = integer_slice(rng, config, Some(0));
                let n = scale.max().clone();
                // mostly on the lattice n λ / 2 ∈ Z, sometimes off it
                let lambda = if config.fixed_lambda.is_none() && rng.random_bool(0.75) {
                    let n_int = n.to_integer().try_into().unwrap_or(2i64);
                    ratio(2 * rng.random_range(0..=n_int / 2), n_int)
                } else {
                    random_lambda(rng, config)?
                };
                (scale, Rational::zero(), n, lambda)
            }
            ScaleFamily::QLattice => {
                let scale = q_lattice(rng, config);
                let (a, b) = (scale.min().clone(), scale.max().clone());
                (scale, a, b, random_lambda(rng, config)?)
            }
            _ => {
                let scale = real_interval(rng);
                let Some((a, b)) = endpoints(rng, &scale) else { continue };
                (scale, a, b, random_lambda(rng, config)?)
            }
        };
        let (lo, hi) = split_points(&scale, &a, &b, &lambda);
        let Some(t) = member(rng, &scale, &lo, &hi) else { continue };
        let Some(s) = member(rng, &scale, scale.min(), scale.max()) else { continue };
        let f = random_function(rng, config.poly_degree_max);
        return Ok(Some(CaseInput { scale, f, g: None, a, b, lambda, t, c: Some(s), weights: None }));
    }
    Ok(None)
}

fn check_closed_forms<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let scale = &case.scale;
    let family = scale.family().ok_or_else(|| Error::Config("closed-forms case on a non-canonical scale".into()))?;
    let s = case.c.as_ref().ok_or_else(|| Error::Config("closed-forms case needs s".into()))?;
    let mut o = Outcome::new();
    let compare = |o: &mut Outcome<S>, what: &str, x: &S, y: &S, mag: &S| {
        worst(&mut o.residual, (x.clone() - y.clone()).abs());
        if !close(x, y, tol.closed_form, mag) {
            fail(o, format!("{what}: {x} != {y}"));
        }
    };

    let rec = h_k(scale, 2, &case.t, s)?.value;
    let closed = h2_closed_form(&family, &case.t, s)?;
    compare(&mut o, "h2 recursion vs closed form", &rec, &closed, &closed.abs());

    let p = params(case)?;
    let len = p.length();
    match family {
        Family::Reals => {
            let r = ostrowski_bound(&case.f, scale, &p, BoundMode::Direct)?;
            let want = continuous_rhs(&r.m, &p.a, &p.b, &p.lambda, &p.t);
            compare(&mut o, "continuous closed form", &r.rhs, &want, &want);
            o.tallies.push("reals");
        }
        Family::Integers => {
            let i = p.t.clone() - p.a.clone();
            let n = len.to_f64().round() as i64;
            let want = integer_rhs(&S::one(), n, &i, &p.lambda);
            let direct = ostrowski_bound(&case.f, scale, &p, BoundMode::Direct)?;
            if scale.contains(&p.split_lo) {
                let r = ostrowski_bound(&case.f, scale, &p, BoundMode::FourH2)?;
                let want_m = r.m.clone() * want.clone();
                compare(&mut o, "integer closed form", &r.rhs, &want_m, &want_m);
                compare(&mut o, "integer closed form vs direct", &direct.rhs, &want_m, &want_m);
                o.tallies.push("integers");
            } else if !direct.m.is_zero()
                && close(&(direct.rhs.clone() / direct.m.clone()), &want, tol.closed_form, &want)
            {
                o.tallies.push("integers-off-lattice-equal");
            } else {
                o.tallies.push("integers-off-lattice-differ");
            }
        }
        Family::QLattice(q) => {
            let r = ostrowski_bound(&case.f, scale, &p, BoundMode::FourH2ClosedForm)?;
            let got = r.components.clone().ok_or_else(|| Error::Config("missing components".into()))?;
            let want = quantum_terms(&q, &p.a, &p.b, &p.lambda, &p.t);
            for (g, w) in got.iter().zip(want.iter()) {
                compare(&mut o, "quantum h2 term", g, w, &(p.b.clone() * p.b.clone()));
            }
            let sum = want.iter().cloned().fold(S::zero(), |acc, x| acc + x);
            let rhs = r.m.clone() * sum / len;
            compare(&mut o, "quantum rhs", &r.rhs, &rhs, &rhs);
            o.tallies.push("q-lattice");
            // off-lattice split points: the extended h2 terms can go negative
            if !nonnegative(&r.margin, tol.inequality, &r.lhs.abs()) {
                o.tallies.push("q-lattice-closed-form-below-lhs");
            }
        }
    }
    Ok(o)
}

fn sharpness_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    for _ in 0..MAX_REDRAWS {
        let family = pick(rng, &config.families);
        let scale = random_scale(rng, family, config);
        let Some((a, b)) = endpoints(rng, &scale) else { continue };
        let lambda = random_lambda(rng, config)?;
        return Ok(Some(CaseInput {
            scale,
            f: Function::identity(),
            g: None,
            t: a.clone(),
            a,
            b,
            lambda,
            c: None,
            weights: None,
        }));
    }
    Ok(None)
}

fn check_sharpness<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let (scale, a, b) = (&case.scale, &case.a, &case.b);
    let id = Function::identity();
    let mut o = Outcome::new();
    // λ = 0 at either endpoint attains equality on every scale
    for t in [a, b] {
        let p = KernelParams::new(scale, a, b, &S::zero(), t)?;
        let r = ostrowski_bound(&id, scale, &p, BoundMode::Direct)?;
        worst(&mut o.residual, (r.lhs.clone() - r.rhs.clone()).abs());
        if !r.equality_case {
            fail(&mut o, format!("no equality at λ = 0, t = {t}: lhs {} rhs {}", r.lhs, r.rhs));
        }
        if matches!(scale.family(), Some(Family::Reals)) {
            let half = (b.clone() - a.clone()).half();
            if !close(&r.lhs, &half, tol.closed_form, &half) || !close(&r.rhs, &half, tol.closed_form, &half) {
                fail(&mut o, format!("continuous constant: lhs {} rhs {} expected {half}", r.lhs, r.rhs));
            }
        }
    }
    // predicted equality at t = b - λ(b-a)/2
    match sharpness_condition(scale, a, b, &case.lambda) {
        Ok(true) => {
            o.tallies.push("condition-held");
            let (_, hi) = split_points(scale, a, b, &case.lambda);
            if scale.contains(&hi) {
                let p = KernelParams::new(scale, a, b, &case.lambda, &hi)?;
                let r = ostrowski_bound(&id, scale, &p, BoundMode::Direct)?;
                worst(&mut o.residual, (r.lhs.clone() - r.rhs.clone()).abs());
                if r.equality_case {
                    o.tallies.push("predicted-equality-observed");
                } else {
                    fail(&mut o, format!("condition holds but lhs {} != rhs {}", r.lhs, r.rhs));
                }
            }
        }
        Ok(false) => o.tallies.push("condition-failed"),
        Err(Error::SharpnessLimitOffScale(_)) => o.tallies.push("condition-unevaluable"),
        Err(e) => return Err(e),
    }
    Ok(o)
}

fn gruss_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    for _ in 0..MAX_REDRAWS {
        let family = pick(rng, &config.families);
        let scale = random_scale(rng, family, config);
        let Some((a, b)) = endpoints(rng, &scale) else { continue };
        let Some(t) = member(rng, &scale, &a, &b) else { continue };
        let f = random_function(rng, config.poly_degree_max);
        return Ok(Some(CaseInput { scale, f, g: None, a, b, lambda: Rational::zero(), t, c: None, weights: None }));
    }
    Ok(None)
}

fn check_gruss<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let (scale, a, b, t) = (&case.scale, &case.a, &case.b, &case.t);
    let mag = magnitude(&case.f, a, b);
    let bounds = GrussParams::tight(&case.f, scale, a, b)?;
    let r = gruss_check(&case.f, scale, a, b, t, &bounds)?;
    let mut o = Outcome::new();
    o.margin = Some(r.margin.clone());
    if !nonnegative(&r.margin, tol.inequality, &mag) {
        fail(&mut o, format!("Grüss bound violated: lhs {} > rhs {}", r.lhs, r.rhs));
    }
    let id = Function::identity();
    let flat = gruss_check(&id, scale, a, b, t, &GrussParams::new(S::one(), S::one())?)?;
    o.residual = Some(flat.lhs.clone());
    if !close(&flat.lhs, &S::zero(), tol.identity, &magnitude(&id, a, b)) {
        fail(&mut o, format!("identity gives nonzero lhs {}", flat.lhs));
    }
    Ok(o)
}

fn mirrored_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Option<CaseInput<Rational>>> {
    for _ in 0..MAX_REDRAWS {
        let unit = pick(rng, &config.families) == ScaleFamily::IntegerSlice;
        let scale = mirrored_discrete(rng, config, unit);
        let (a, b) = (scale.min().clone(), scale.max().clone());
        let center = (a.clone() + b.clone()) / ratio(2, 1);
        let Some(x) = member(rng, &scale, &a, &center) else { continue };
        let lambda = (x - a.clone()) * ratio(2, 1) / (b.clone() - a.clone());
        let (lo, hi) = split_points(&scale, &a, &b, &lambda);
        let Some(t) = member(rng, &scale, &lo, &hi) else { continue };
        let f = random_function(rng, config.poly_degree_max);
        return Ok(Some(CaseInput { scale, f, g: None, a, b, lambda, t, c: None, weights: None }));
    }
    Ok(None)
}

fn check_modes<S: Scalar>(case: &CaseInput<S>, tol: &Tol) -> Result<Outcome<S>> {
    let p = params(case)?;
    let direct = ostrowski_bound(&case.f, &case.scale, &p, BoundMode::Direct)?;
    let split = ostrowski_bound(&case.f, &case.scale, &p, BoundMode::FourH2)?;
    let mut o = Outcome::new();
    o.residual = Some((direct.rhs.clone() - split.rhs.clone()).abs());
    if split.mode != ReportMode::FourH2Members {
        fail(&mut o, format!("split points not members: mode {}", split.mode.as_str()));
    }
    let mag = direct.m.clone() * p.length();
    if !close(&direct.rhs, &split.rhs, tol.identity, &mag) {
        fail(&mut o, format!("direct rhs {} != four-h2 rhs {}", direct.rhs, split.rhs));
    }
    Ok(o)
}
