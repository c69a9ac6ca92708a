//! Randomized verification of the calculus and the bounds.
//!
//! Each suite draws `cases` inputs from a deterministic per-case stream
//! (seed, index), evaluates one property on them, and collects violations
//! with their full inputs so they can be replayed.

mod generate;
pub mod oracle;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar};

pub use generate::{case_rng, generate_case, CaseInput, CaseRecord};
pub use oracle::oracle_integral;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleFamily {
    IntegerSlice,
    QLattice,
    RealInterval,
    /// At least one interval and one isolated point.
    Hybrid,
    /// Irregularly spaced isolated points.
    HybridDiscrete,
}

impl ScaleFamily {
    pub const ALL: [ScaleFamily; 5] = [
        ScaleFamily::IntegerSlice,
        ScaleFamily::QLattice,
        ScaleFamily::RealInterval,
        ScaleFamily::Hybrid,
        ScaleFamily::HybridDiscrete,
    ];

    pub const DISCRETE: [ScaleFamily; 3] =
        [ScaleFamily::IntegerSlice, ScaleFamily::QLattice, ScaleFamily::HybridDiscrete];

    pub fn is_discrete(self) -> bool {
        Self::DISCRETE.contains(&self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub identity: f64,
    pub inequality: f64,
    pub closed_form: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identity: 1e-10, inequality: 1e-9, closed_form: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub families: Vec<ScaleFamily>,
    pub max_points: usize,
    pub poly_degree_max: usize,
    pub backend: Backend,
    /// Restrict λ to {0, 1/4, 1/3, 1/2, 3/4, 1}.
    pub lambda_grid_only: bool,
    /// Pin λ for every case.
    pub fixed_lambda: Option<String>,
    pub tolerances: Tolerances,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: usize, backend: Backend) -> Self {
        SuiteConfig {
            seed,
            cases,
            families: ScaleFamily::ALL.to_vec(),
            max_points: 64,
            poly_degree_max: 5,
            backend,
            lambda_grid_only: false,
            fixed_lambda: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_families(mut self, families: &[ScaleFamily]) -> Self {
        self.families = families.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::Config("no scale families selected".into()));
        }
        if self.cases == 0 {
            return Err(Error::Config("case count must be positive".into()));
        }
        if self.max_points < 3 {
            return Err(Error::Config("max_points must be at least 3".into()));
        }
        let t = &self.tolerances;
        if self.backend == Backend::Float && !(t.identity > 0.0 && t.inequality > 0.0 && t.closed_form > 0.0) {
            return Err(Error::Config("float tolerances must be positive".into()));
        }
        if let Some(l) = &self.fixed_lambda {
            let l = crate::scalar::parse_rational(l)?;
            if l < Rational::from_int(0) || l > Rational::from_int(1) {
                return Err(Error::LambdaOutOfRange(l.to_string()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Identity,
    Inequality,
    CalculusRules,
    ClosedForms,
    Sharpness,
    Gruss,
    ModeAgreement,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Identity,
        SuiteName::Inequality,
        SuiteName::CalculusRules,
        SuiteName::ClosedForms,
        SuiteName::Sharpness,
        SuiteName::Gruss,
        SuiteName::ModeAgreement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Identity => "identity",
            SuiteName::Inequality => "inequality",
            SuiteName::CalculusRules => "calculus-rules",
            SuiteName::ClosedForms => "closed-forms",
            SuiteName::Sharpness => "sharpness",
            SuiteName::Gruss => "gruss",
            SuiteName::ModeAgreement => "mode-agreement",
        }
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one property on one case.
#[derive(Clone, Debug)]
pub struct Outcome<S> {
    /// Deviation of a claimed identity (`|lhs - rhs|`).
    pub residual: Option<S>,
    /// Slack of a claimed inequality (`rhs - lhs`).
    pub margin: Option<S>,
    pub failure: Option<String>,
    /// Named counters, e.g. how often a side condition held.
    pub tallies: Vec<&'static str>,
}

impl<S: Scalar> Outcome<S> {
    fn new() -> Self {
        Outcome { residual: None, margin: None, failure: None, tallies: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub detail: String,
    pub case: CaseRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: SuiteName,
    pub backend: Backend,
    pub seed: u64,
    pub cases_run: u64,
    pub skipped: u64,
    pub max_residual: Option<Value>,
    pub min_margin: Option<Value>,
    pub tallies: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suites: Vec<SuiteResult>,
    pub verdict: Verdict,
}

impl SuiteReport {
    pub fn from_results(suites: Vec<SuiteResult>) -> Self {
        let verdict = if suites.iter().all(|s| s.verdict == Verdict::Pass) { Verdict::Pass } else { Verdict::Fail };
        SuiteReport { suites, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

enum CaseResult<S> {
    Skipped,
    Done { index: u64, record: Box<CaseRecord>, outcome: Outcome<S> },
}

/// Runs the named property over `config.cases` generated cases.
pub fn run_suite<S: Scalar>(name: SuiteName, config: &SuiteConfig) -> Result<SuiteReport> {
    Ok(SuiteReport::from_results(vec![run_one::<S>(name, config)?]))
}

/// Same as [`run_suite`] with the backend chosen at run time.
pub fn run_suite_dyn(name: SuiteName, config: &SuiteConfig) -> Result<SuiteReport> {
    match config.backend {
        Backend::Rational => run_suite::<Rational>(name, config),
        Backend::Float => run_suite::<f64>(name, config),
    }
}

fn run_one<S: Scalar>(name: SuiteName, config: &SuiteConfig) -> Result<SuiteResult> {
    config.validate()?;
    if S::BACKEND != config.backend {
        return Err(Error::Config(format!(
            "config backend `{}` does not match the scalar backend `{}`",
            config.backend,
            S::BACKEND
        )));
    }
    let results: Vec<Result<CaseResult<S>>> = (0..config.cases as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = case_rng(config.seed, index);
            let Some(input) = suites::generate(name, &mut rng, config)? else {
                return Ok(CaseResult::Skipped);
            };
            let input = input.convert::<S>()?;
            let outcome = suites::check(name, &input, config)?;
            Ok(CaseResult::Done { index, record: Box::new(input.record()), outcome })
        })
        .collect();

    let mut result = SuiteResult {
        name,
        backend: S::BACKEND,
        seed: config.seed,
        cases_run: 0,
        skipped: 0,
        max_residual: None,
        min_margin: None,
        tallies: BTreeMap::new(),
        violations: Vec::new(),
        verdict: Verdict::Pass,
    };
    let mut max_residual: Option<S> = None;
    let mut min_margin: Option<S> = None;
    for r in results {
        match r? {
            CaseResult::Skipped => result.skipped += 1,
            CaseResult::Done { index, record, outcome } => {
                result.cases_run += 1;
                if let Some(res) = outcome.residual {
                    max_residual = Some(match max_residual {
                        Some(m) => S::max_of(m, res),
                        None => res,
                    });
                }
                if let Some(m) = outcome.margin {
                    min_margin = Some(match min_margin {
                        Some(x) => S::min_of(x, m),
                        None => m,
                    });
                }
                for t in outcome.tallies {
                    *result.tallies.entry(t.to_string()).or_insert(0) += 1;
                }
                if let Some(detail) = outcome.failure {
                    result.violations.push(Violation { index, detail, case: *record });
                }
            }
        }
    }
    result.max_residual = max_residual.map(|x| x.to_json());
    result.min_margin = min_margin.map(|x| x.to_json());
    if !result.violations.is_empty() {
        result.verdict = Verdict::Fail;
    }
    Ok(result)
}

/// Re-runs the property on a recorded case. Returns `None` when it holds,
/// otherwise the violation detail.
pub fn replay<S: Scalar>(name: SuiteName, record: &CaseRecord, config: &SuiteConfig) -> Result<Option<String>> {
    let input = CaseInput::<S>::from_record(record)?;
    Ok(suites::check(name, &input, config)?.failure)
}
