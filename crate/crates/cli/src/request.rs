//! Validated requests. A request is also the `inputs` block embedded in every
//! report, so it round-trips through serde unchanged.

use std::fs;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tscalc_core::scalar::{parse_rational, ratio};
use tscalc_core::verifier::{SuiteConfig, SuiteName};
use tscalc_core::{Backend, BoundMode, FunctionSpec, NumLit, ScaleSpec, SpecialKind};

use crate::args::{BoundArgs, Command, GrussArgs, H2Args, PointArgs, ScaleArgs, SharpnessArgs, SuiteArgs};
use crate::InputError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "inputs", rename_all = "kebab-case")]
pub enum Request {
    Bound(BoundInputs),
    Identity(PointInputs),
    H2(H2Inputs),
    Sharpness(SharpnessInputs),
    Gruss(GrussInputs),
    Suite(SuiteInputs),
}

impl Request {
    pub fn command(&self) -> &'static str {
        match self {
            Request::Bound(_) => "bound",
            Request::Identity(_) => "identity",
            Request::H2(_) => "h2",
            Request::Sharpness(_) => "sharpness",
            Request::Gruss(_) => "gruss",
            Request::Suite(_) => "suite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundInputs {
    pub scale: ScaleSpec,
    pub function: FunctionSpec,
    pub a: Option<NumLit>,
    pub b: Option<NumLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<NumLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<NumLit>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointInputs {
    pub scale: ScaleSpec,
    pub function: FunctionSpec,
    pub a: Option<NumLit>,
    pub b: Option<NumLit>,
    pub lambda: NumLit,
    pub t: NumLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Inputs {
    pub scale: ScaleSpec,
    pub k: usize,
    pub t: NumLit,
    pub s: NumLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessInputs {
    pub scale: ScaleSpec,
    pub a: Option<NumLit>,
    pub b: Option<NumLit>,
    pub lambda: NumLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrussInputs {
    pub scale: ScaleSpec,
    pub function: FunctionSpec,
    pub a: Option<NumLit>,
    pub b: Option<NumLit>,
    pub t: NumLit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<NumLit>,
    #[serde(default, rename = "Gamma", skip_serializing_if = "Option::is_none")]
    pub big_gamma: Option<NumLit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteInputs {
    pub suites: Vec<SuiteName>,
    pub config: SuiteConfig,
}

/// Reads a document given either inline (leading `{`) or as a path.
fn document(arg: &str, what: &str) -> Result<String, InputError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| InputError(format!("cannot read {what} `{arg}`: {e}")))
}

fn scale_spec(arg: &str, backend: Option<Backend>) -> Result<ScaleSpec, InputError> {
    let text = document(arg, "scale spec")?;
    let mut spec = ScaleSpec::from_json(&text)?;
    if let Some(requested) = backend {
        let raw: Value = serde_json::from_str(&text).map_err(|e| InputError(format!("scale spec: {e}")))?;
        if raw.get("backend").is_some() && spec.backend != requested {
            return Err(InputError(format!(
                "--backend {requested} conflicts with the scale spec backend `{}`",
                spec.backend
            )));
        }
        spec.backend = requested;
    }
    Ok(spec)
}

fn function_spec(arg: &str) -> Result<FunctionSpec, InputError> {
    Ok(FunctionSpec::from_json(&document(arg, "function spec")?)?)
}

fn lit(text: &str) -> NumLit {
    NumLit::Text(text.to_string())
}

/// λ must lie in [0, 1]; checked on the exact value regardless of backend.
fn lambda(text: &str) -> Result<NumLit, InputError> {
    let l = parse_rational(text)?;
    if l < ratio(0, 1) || l > ratio(1, 1) {
        return Err(InputError(format!("lambda = {text} lies outside [0, 1]")));
    }
    Ok(lit(text))
}

fn range(args: &ScaleArgs) -> Result<(ScaleSpec, Option<NumLit>, Option<NumLit>), InputError> {
    let spec = scale_spec(&args.scale, args.backend)?;
    Ok((spec, args.a.as_deref().map(lit), args.b.as_deref().map(lit)))
}

impl Request {
    pub fn from_command(command: &Command) -> Result<Request, InputError> {
        Ok(match command {
            Command::Bound(args) => Request::Bound(bound(args)?),
            Command::Identity(args) => Request::Identity(point(args)?),
            Command::H2(args) => Request::H2(h2(args)?),
            Command::Sharpness(args) => Request::Sharpness(sharpness(args)?),
            Command::Gruss(args) => Request::Gruss(gruss(args)?),
            Command::Suite(args) => Request::Suite(suite(args)?),
        })
    }
}

fn bound(args: &BoundArgs) -> Result<BoundInputs, InputError> {
    let mode: BoundMode = args.mode.parse()?;
    let kind = args.kind.as_deref().map(str::parse::<SpecialKind>).transpose()?;
    let lambda_lit = args.lambda.as_deref().map(lambda).transpose()?;
    match kind {
        None if args.t.is_none() => return Err(InputError("bound needs --t (or a --kind that fixes it)".into())),
        Some(k) => {
            if k.fixes_lambda() && args.lambda.is_some() {
                return Err(InputError(format!("--kind {k} fixes lambda; drop --lambda")));
            }
            if k.fixes_t() && args.t.is_some() {
                return Err(InputError(format!("--kind {k} fixes t = (a+b)/2; drop --t")));
            }
            if !k.fixes_lambda() && args.lambda.is_none() {
                return Err(InputError(format!("--kind {k} needs --lambda")));
            }
            if !k.fixes_t() && args.t.is_none() {
                return Err(InputError(format!("--kind {k} needs --t")));
            }
        }
        None => {}
    }
    let (scale, a, b) = range(&args.scale)?;
    Ok(BoundInputs {
        scale,
        function: function_spec(&args.function)?,
        a,
        b,
        lambda: lambda_lit.or_else(|| kind.is_none().then(|| lit("0"))),
        t: args.t.as_deref().map(lit),
        mode: mode.as_str().to_string(),
        kind: kind.map(|k| k.as_str().to_string()),
    })
}

fn point(args: &PointArgs) -> Result<PointInputs, InputError> {
    let lambda = lambda(&args.lambda)?;
    let (scale, a, b) = range(&args.scale)?;
    Ok(PointInputs { scale, function: function_spec(&args.function)?, a, b, lambda, t: lit(&args.t) })
}

fn h2(args: &H2Args) -> Result<H2Inputs, InputError> {
    Ok(H2Inputs { scale: scale_spec(&args.scale, args.backend)?, k: args.k, t: lit(&args.t), s: lit(&args.s) })
}

fn sharpness(args: &SharpnessArgs) -> Result<SharpnessInputs, InputError> {
    let lambda = lambda(&args.lambda)?;
    let (scale, a, b) = range(&args.scale)?;
    Ok(SharpnessInputs { scale, a, b, lambda })
}

fn gruss(args: &GrussArgs) -> Result<GrussInputs, InputError> {
    let (scale, a, b) = range(&args.scale)?;
    Ok(GrussInputs {
        scale,
        function: function_spec(&args.function)?,
        a,
        b,
        t: lit(&args.t),
        gamma: args.gamma.as_deref().map(lit),
        big_gamma: args.big_gamma.as_deref().map(lit),
    })
}

fn suite(args: &SuiteArgs) -> Result<SuiteInputs, InputError> {
    let suites = if args.name == "all" { SuiteName::ALL.to_vec() } else { vec![args.name.parse()?] };
    let mut config = SuiteConfig::new(args.seed, args.cases, args.backend);
    if !args.families.is_empty() {
        config = config.with_families(&args.families);
    }
    config.lambda_grid_only = args.lambda_grid_only;
    config.fixed_lambda = args.fixed_lambda.clone();
    if let Some(n) = args.max_points {
        config.max_points = n;
    }
    if let Some(d) = args.degree {
        config.poly_degree_max = d;
    }
    config.validate()?;
    Ok(SuiteInputs { suites, config })
}
