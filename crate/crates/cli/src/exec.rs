//! Runs a request and assembles the report document.
//!
//! Inputs are echoed back normalized (numbers in the backend's canonical
//! text, defaults filled in), so executing a report's own `inputs` block
//! reproduces the report exactly.

use serde_json::{json, Value};
use tscalc_core::hk::h_k_closed_form;
use tscalc_core::ostrowski::split_points;
use tscalc_core::verifier::{run_suite_dyn, SuiteReport, Tolerances};
use tscalc_core::{
    gruss_check, h_k, montgomery_sides, ostrowski_bound, sharpness_condition, special_case_bound, Backend, BoundMode,
    Function, GrussParams, KernelParams, NumLit, Rational, Scalar, ScaleSpec, SpecialKind, TimeScale,
};

use crate::request::{BoundInputs, GrussInputs, H2Inputs, PointInputs, Request, SharpnessInputs, SuiteInputs};
use crate::InputError;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub request: Request,
    pub result: Value,
    /// Set when a checked claim failed.
    pub violation: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut doc = match serde_json::to_value(&self.request).expect("requests serialize") {
            Value::Object(m) => m,
            _ => unreachable!("adjacently tagged enum is an object"),
        };
        doc.insert("result".into(), self.result.clone());
        doc.insert("status".into(), Value::from(if self.violation.is_some() { "violation" } else { "ok" }));
        if let Some(v) = &self.violation {
            doc.insert("detail".into(), Value::from(v.clone()));
        }
        Value::Object(doc)
    }
}

pub fn execute(request: &Request) -> Result<Report, InputError> {
    if let Request::Suite(inputs) = request {
        return suite(inputs);
    }
    match backend_of(request) {
        Backend::Rational => evaluate::<Rational>(request),
        Backend::Float => evaluate::<f64>(request),
    }
}

fn backend_of(request: &Request) -> Backend {
    match request {
        Request::Bound(i) => i.scale.backend,
        Request::Identity(i) => i.scale.backend,
        Request::H2(i) => i.scale.backend,
        Request::Sharpness(i) => i.scale.backend,
        Request::Gruss(i) => i.scale.backend,
        Request::Suite(i) => i.config.backend,
    }
}

fn evaluate<S: Scalar>(request: &Request) -> Result<Report, InputError> {
    match request {
        Request::Bound(i) => bound::<S>(i),
        Request::Identity(i) => identity::<S>(i),
        Request::H2(i) => h2::<S>(i),
        Request::Sharpness(i) => sharpness::<S>(i),
        Request::Gruss(i) => gruss::<S>(i),
        Request::Suite(_) => unreachable!("handled by execute"),
    }
}

fn num<S: Scalar>(x: &NumLit) -> Result<S, InputError> {
    Ok(x.parse()?)
}

fn lit<S: Scalar>(x: &S) -> NumLit {
    NumLit::from_scalar(x)
}

/// Scale plus `[a, b]`, defaulting to the scale's extent.
fn range<S: Scalar>(
    spec: &ScaleSpec,
    a: &Option<NumLit>,
    b: &Option<NumLit>,
) -> Result<(TimeScale<S>, S, S), InputError> {
    let scale = TimeScale::<S>::from_spec(spec)?;
    let a = match a {
        Some(x) => scale.snap(&num(x)?)?,
        None => scale.min().clone(),
    };
    let b = match b {
        Some(x) => scale.snap(&num(x)?)?,
        None => scale.max().clone(),
    };
    Ok((scale, a, b))
}

/// Float results carry the comparison tolerance they were judged with.
fn tag_tolerance<S: Scalar>(result: &mut Value, tol: f64) {
    result["backend"] = Value::from(S::BACKEND.as_str());
    if !S::is_exact() {
        result["tolerance"] = json!(tol);
    }
}

/// `|x| ≤ tol · max(1, scale)` on floats, `x == 0` exactly otherwise.
fn negligible<S: Scalar>(x: &S, tol: f64, scale: &S) -> bool {
    if S::is_exact() {
        return x.is_zero();
    }
    x.abs().to_f64() <= tol * scale.abs().to_f64().max(1.0)
}

fn bound<S: Scalar>(i: &BoundInputs) -> Result<Report, InputError> {
    let (scale, a, b) = range::<S>(&i.scale, &i.a, &i.b)?;
    let f = Function::<S>::from_spec(&i.function)?;
    let mode: BoundMode = i.mode.parse()?;
    let lambda = i.lambda.as_ref().map(num::<S>).transpose()?;
    let t = i.t.as_ref().map(num::<S>).transpose()?;
    let report = match &i.kind {
        Some(kind) => {
            let kind: SpecialKind = kind.parse()?;
            let extra = if kind.fixes_t() { lambda.as_ref() } else { t.as_ref() };
            special_case_bound(kind, &f, &scale, &a, &b, extra, mode)?
        }
        None => {
            let lambda = lambda.ok_or_else(|| InputError("bound needs lambda".into()))?;
            let t = t.ok_or_else(|| InputError("bound needs t".into()))?;
            let p = KernelParams::new(&scale, &a, &b, &lambda, &t)?;
            ostrowski_bound(&f, &scale, &p, mode)?
        }
    };
    let tol = Tolerances::default().inequality;
    let scale_mag = S::max_of(report.lhs.abs(), report.rhs.abs());
    let held = report.margin >= S::zero() || negligible(&report.margin, tol, &scale_mag);
    let violation =
        (!held).then(|| format!("bound violated: lhs {} > rhs {}", report.lhs.to_text(), report.rhs.to_text()));
    let mut result = report.to_json();
    if !S::is_exact() {
        result["tolerance"] = json!(tol);
    }
    let inputs = BoundInputs {
        scale: i.scale.clone(),
        function: i.function.clone(),
        a: Some(lit(&a)),
        b: Some(lit(&b)),
        lambda: i.lambda.as_ref().map(|l| num::<S>(l).map(|x| lit(&x))).transpose()?,
        t: i.t.as_ref().map(|x| num::<S>(x).map(|x| lit(&x))).transpose()?,
        mode: mode.as_str().to_string(),
        kind: i.kind.clone(),
    };
    Ok(Report { request: Request::Bound(inputs), result, violation })
}

fn identity<S: Scalar>(i: &PointInputs) -> Result<Report, InputError> {
    let (scale, a, b) = range::<S>(&i.scale, &i.a, &i.b)?;
    let f = Function::<S>::from_spec(&i.function)?;
    let lambda: S = num(&i.lambda)?;
    let p = KernelParams::new(&scale, &a, &b, &lambda, &num(&i.t)?)?;
    let sides = montgomery_sides(&f, &scale, &p)?;
    let tol = Tolerances::default().identity;
    let holds = negligible(&sides.residual, tol, &S::max_of(sides.lhs.abs(), sides.rhs.abs()));
    let mut result = json!({
        "lhs": sides.lhs.to_json(),
        "rhs": sides.rhs.to_json(),
        "residual": sides.residual.to_json(),
        "split_points": [p.split_lo.to_json(), p.split_hi.to_json()],
        "holds": holds,
    });
    tag_tolerance::<S>(&mut result, tol);
    let violation = (!holds).then(|| format!("identity residual {}", sides.residual.to_text()));
    let inputs = PointInputs {
        scale: i.scale.clone(),
        function: i.function.clone(),
        a: Some(lit(&a)),
        b: Some(lit(&b)),
        lambda: lit(&lambda),
        t: lit(&p.t),
    };
    Ok(Report { request: Request::Identity(inputs), result, violation })
}

fn h2<S: Scalar>(i: &H2Inputs) -> Result<Report, InputError> {
    let scale = TimeScale::<S>::from_spec(&i.scale)?;
    let (t, s): (S, S) = (num(&i.t)?, num(&i.s)?);
    let rec = h_k(&scale, i.k, &t, &s)?;
    let family = scale.family();
    let closed = match &family {
        Some(fam) if i.k <= 2 => Some(h_k_closed_form(fam, i.k, &rec.t, &rec.s)?.value),
        _ => None,
    };
    let tol = Tolerances::default().closed_form;
    let agree = closed
        .as_ref()
        .map(|c| negligible(&(c.clone() - rec.value.clone()), tol, &S::max_of(c.abs(), rec.value.abs())));
    let mut result = json!({
        "value": rec.value.to_json(),
        "closed_form": closed.as_ref().map(|c| c.to_json()),
        "family": family.as_ref().map(|f| f.name()),
        "agree": agree,
    });
    tag_tolerance::<S>(&mut result, tol);
    let violation = (agree == Some(false)).then(|| {
        format!(
            "recursion gives {} but the closed form gives {}",
            rec.value.to_text(),
            closed.as_ref().map(|c| c.to_text()).unwrap_or_default()
        )
    });
    let inputs = H2Inputs { scale: i.scale.clone(), k: i.k, t: lit(&rec.t), s: lit(&rec.s) };
    Ok(Report { request: Request::H2(inputs), result, violation })
}

fn sharpness<S: Scalar>(i: &SharpnessInputs) -> Result<Report, InputError> {
    let (scale, a, b) = range::<S>(&i.scale, &i.a, &i.b)?;
    let lambda: S = num(&i.lambda)?;
    let holds = sharpness_condition(&scale, &a, &b, &lambda)?;
    let (_, t_star) = split_points(&scale, &a, &b, &lambda);
    let mut result = json!({ "result": holds, "t": t_star.to_json(), "equality": Value::Null });
    let mut violation = None;
    if holds && scale.contains(&t_star) {
        let p = KernelParams::new(&scale, &a, &b, &lambda, &t_star)?;
        let r = ostrowski_bound(&Function::identity(), &scale, &p, BoundMode::Direct)?;
        result["equality"] = json!({
            "lhs": r.lhs.to_json(),
            "rhs": r.rhs.to_json(),
            "equality_case": r.equality_case,
        });
        if !r.equality_case {
            violation =
                Some(format!("condition holds but f = id gives lhs {} and rhs {}", r.lhs.to_text(), r.rhs.to_text()));
        }
    }
    tag_tolerance::<S>(&mut result, Tolerances::default().closed_form);
    let inputs = SharpnessInputs { scale: i.scale.clone(), a: Some(lit(&a)), b: Some(lit(&b)), lambda: lit(&lambda) };
    Ok(Report { request: Request::Sharpness(inputs), result, violation })
}

fn gruss<S: Scalar>(i: &GrussInputs) -> Result<Report, InputError> {
    let (scale, a, b) = range::<S>(&i.scale, &i.a, &i.b)?;
    let f = Function::<S>::from_spec(&i.function)?;
    let t: S = scale.snap(&num(&i.t)?)?;
    let params = match (&i.gamma, &i.big_gamma) {
        (Some(lo), Some(hi)) => GrussParams::new(num(lo)?, num(hi)?)?,
        (None, None) => GrussParams::tight(&f, &scale, &a, &b)?,
        _ => return Err(InputError("--gamma and --Gamma go together".into())),
    };
    let r = gruss_check(&f, &scale, &a, &b, &t, &params)?;
    let tol = Tolerances::default().inequality;
    let held = r.margin >= S::zero() || negligible(&r.margin, tol, &S::max_of(r.lhs.abs(), r.rhs.abs()));
    let mut result = r.to_json();
    result["gamma"] = params.gamma.to_json();
    result["Gamma"] = params.big_gamma.to_json();
    if !S::is_exact() {
        result["tolerance"] = json!(tol);
    }
    let violation = (!held).then(|| format!("Grüss bound violated: lhs {} > rhs {}", r.lhs.to_text(), r.rhs.to_text()));
    let inputs = GrussInputs {
        scale: i.scale.clone(),
        function: i.function.clone(),
        a: Some(lit(&a)),
        b: Some(lit(&b)),
        t: lit(&t),
        gamma: i.gamma.as_ref().map(|_| lit(&params.gamma)),
        big_gamma: i.big_gamma.as_ref().map(|_| lit(&params.big_gamma)),
    };
    Ok(Report { request: Request::Gruss(inputs), result, violation })
}

fn suite(i: &SuiteInputs) -> Result<Report, InputError> {
    let mut results = Vec::new();
    for name in &i.suites {
        results.extend(run_suite_dyn(*name, &i.config)?.suites);
    }
    let report = SuiteReport::from_results(results);
    let failed: Vec<String> = report
        .suites
        .iter()
        .filter(|s| !s.violations.is_empty())
        .map(|s| format!("{}: {} violation(s)", s.name, s.violations.len()))
        .collect();
    let mut result = serde_json::to_value(&report).expect("suite reports serialize");
    if i.config.backend == Backend::Float {
        result["tolerance"] = serde_json::to_value(&i.config.tolerances).expect("plain struct");
    }
    let violation = (!report.passed()).then(|| failed.join("; "));
    Ok(Report { request: Request::Suite(i.clone()), result, violation })
}

/// Field-by-field difference between two documents, as JSON pointers.
pub fn differences(expected: &Value, actual: &Value) -> Vec<String> {
    let mut out = Vec::new();
    diff("", expected, actual, &mut out);
    out
}

fn diff(path: &str, x: &Value, y: &Value, out: &mut Vec<String>) {
    match (x, y) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                let p = format!("{path}/{k}");
                match (a.get(k), b.get(k)) {
                    (Some(u), Some(v)) => diff(&p, u, v, out),
                    _ => out.push(p),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (n, (u, v)) in a.iter().zip(b).enumerate() {
                diff(&format!("{path}/{n}"), u, v, out);
            }
        }
        _ if x != y => out.push(if path.is_empty() { "/".into() } else { path.into() }),
        _ => {}
    }
}
