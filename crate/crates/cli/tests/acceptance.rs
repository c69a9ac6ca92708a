//! Acceptance run: one PASS/FAIL line per criterion, then a single assert.
//!
//! `cargo test -p tscalc-cli --test acceptance -- --nocapture`

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tscalc_core::scalar::ratio;
use tscalc_core::verifier::{run_suite, ScaleFamily, SuiteConfig, SuiteName, SuiteResult};
use tscalc_core::{
    gruss_check, h_k, ostrowski_bound, Backend, BoundMode, Function, GrussParams, KernelParams, Polynomial, Rational,
    ScaleSpec, TimeScale,
};

use common::*;

const SEED: u64 = 42;
const IDENTITY_CASES: usize = 500;
const IDENTITY_BUDGET: Duration = Duration::from_secs(10);
const INEQUALITY_CASES: usize = 1000;
const INEQUALITY_BUDGET: Duration = Duration::from_secs(30);
const MIN_MARGIN: f64 = -1e-9;
const PAIRS_PER_FAMILY: usize = 200;
const REALS_TOL: f64 = 1e-12;
const SHARPNESS_TOL: f64 = 1e-12;
const CONTINUOUS_CASES: usize = 100;
const CONTINUOUS_TOL: f64 = 1e-12;
const INTEGER_CASES: usize = 100;
const MODE_CASES: usize = 200;
const CALCULUS_CASES: usize = 300;
const GRUSS_CASES: usize = 500;
const GRUSS_MIN_MARGIN: f64 = -1e-9;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn q(n: i64) -> Rational {
    ratio(n, 1)
}

fn single(name: SuiteName, config: &SuiteConfig, float: bool) -> Result<SuiteResult, String> {
    let report = if float { run_suite::<f64>(name, config) } else { run_suite::<Rational>(name, config) };
    let mut report = report.map_err(|e| e.to_string())?;
    Ok(report.suites.remove(0))
}

fn clean(r: &SuiteResult, expected: usize) -> Result<(), String> {
    if !r.violations.is_empty() {
        return Err(format!("{} violations, first: {}", r.violations.len(), r.violations[0].detail));
    }
    if r.cases_run as usize != expected {
        return Err(format!("ran {} of {expected} cases ({} skipped)", r.cases_run, r.skipped));
    }
    Ok(())
}

fn as_f64(v: &Option<Value>) -> Option<f64> {
    v.as_ref().and_then(Value::as_f64)
}

// 1: Montgomery identity, exact, discrete scales, λ on the grid
fn identity_exact() -> Check {
    let mut c = SuiteConfig::new(SEED, IDENTITY_CASES, Backend::Rational).with_families(&ScaleFamily::DISCRETE);
    c.lambda_grid_only = true;
    let start = Instant::now();
    let r = single(SuiteName::Identity, &c, false)?;
    let took = start.elapsed();
    clean(&r, IDENTITY_CASES)?;
    if r.max_residual != Some(Value::from("0")) {
        return Err(format!("max residual {:?}", r.max_residual));
    }
    if took > IDENTITY_BUDGET {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{IDENTITY_CASES} cases, residual 0, {took:.2?}"))
}

// 2: the inequality on mixed scales, float backend
fn inequality_float() -> Check {
    let c = SuiteConfig::new(SEED, INEQUALITY_CASES, Backend::Float);
    let start = Instant::now();
    let r = single(SuiteName::Inequality, &c, true)?;
    let took = start.elapsed();
    clean(&r, INEQUALITY_CASES)?;
    let m = as_f64(&r.min_margin).ok_or("no margin recorded")?;
    if m < MIN_MARGIN {
        return Err(format!("min margin {m:e}"));
    }
    if took > INEQUALITY_BUDGET {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{INEQUALITY_CASES} cases, min margin {m:e}, {took:.2?}"))
}

/// `h_2(t, s)` by summing `μ(τ)(τ - s)` over the points of `[s, t)` of a
/// purely discrete scale given as a sorted list.
fn h2_by_sum(points: &[Rational], t: &Rational, s: &Rational) -> Rational {
    let (lo, hi, sign) = if t >= s { (s, t, 1) } else { (t, s, -1) };
    let mut total = q(0);
    for w in points.windows(2) {
        if &w[0] >= lo && &w[0] < hi {
            total += (&w[1] - &w[0]) * (&w[0] - s);
        }
    }
    total * q(sign)
}

// 3: closed forms of h_2 on Z, the q-lattice and R
fn closed_form_h2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ints: Vec<Rational> = (-10..=10).map(q).collect();
    let z = TimeScale::<Rational>::from_spec(&ScaleSpec::integers(-10, 10, Backend::Rational)).unwrap();
    let qs: Vec<Rational> = (0..=8).map(|k| ratio(3i64.pow(k), 2i64.pow(k))).collect();
    let ql = TimeScale::<Rational>::from_spec(&ScaleSpec::qlattice("3/2", 0, 8, Backend::Rational)).unwrap();
    let reals = TimeScale::<f64>::from_spec(&ScaleSpec::interval("-50", "50", Backend::Float)).unwrap();
    for _ in 0..PAIRS_PER_FAMILY {
        let (t, s) = (&ints[rng.random_range(0..ints.len())], &ints[rng.random_range(0..ints.len())]);
        let d = t - s;
        // binomial coefficient C(t - s, 2)
        let binom = &d * (&d - q(1)) / q(2);
        let got = h_k(&z, 2, t, s).map_err(|e| e.to_string())?.value;
        if got != binom || got != h2_by_sum(&ints, t, s) {
            return Err(format!("Z: h2({t}, {s}) = {got}, expected {binom}"));
        }
        let (t, s) = (&qs[rng.random_range(0..qs.len())], &qs[rng.random_range(0..qs.len())]);
        let product = (t - s) * (t - ratio(3, 2) * s) / ratio(5, 2);
        let got = h_k(&ql, 2, t, s).map_err(|e| e.to_string())?.value;
        if got != product || got != h2_by_sum(&qs, t, s) {
            return Err(format!("q-lattice: h2({t}, {s}) = {got}, expected {product}"));
        }
        let (t, s) = (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let want = (t - s) * (t - s) / 2.0;
        let got = h_k(&reals, 2, &t, &s).map_err(|e| e.to_string())?.value;
        if (got - want).abs() > REALS_TOL * want.max(1.0) {
            return Err(format!("R: h2({t}, {s}) = {got}, expected {want}"));
        }
    }
    // the engine's own closed-form comparison on random canonical cases
    for family in [ScaleFamily::IntegerSlice, ScaleFamily::QLattice] {
        let c = SuiteConfig::new(SEED, PAIRS_PER_FAMILY, Backend::Rational).with_families(&[family]);
        let r = single(SuiteName::ClosedForms, &c, false)?;
        clean(&r, PAIRS_PER_FAMILY)?;
        if r.max_residual != Some(Value::from("0")) {
            return Err(format!("{family:?}: residual {:?}", r.max_residual));
        }
    }
    let mut c = SuiteConfig::new(SEED, PAIRS_PER_FAMILY, Backend::Float).with_families(&[ScaleFamily::RealInterval]);
    c.tolerances.closed_form = REALS_TOL;
    clean(&single(SuiteName::ClosedForms, &c, true)?, PAIRS_PER_FAMILY)?;
    Ok(format!("{PAIRS_PER_FAMILY} pairs per family against sums, binomials and (t-s)^2/2"))
}

// 4: λ = 0, f = id on R attains (b - a)/2 at both endpoints
fn classical_sharpness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let id = Function::<f64>::identity();
    for _ in 0..50 {
        let a: f64 = rng.random_range(-20.0..20.0);
        let b = a + rng.random_range(0.5..30.0);
        let spec = ScaleSpec::interval(&a.to_string(), &b.to_string(), Backend::Float);
        let r = TimeScale::<f64>::from_spec(&spec).unwrap();
        let half = (b - a) / 2.0;
        for t in [a, b] {
            let p = KernelParams::new(&r, &a, &b, &0.0, &t).map_err(|e| e.to_string())?;
            let rep = ostrowski_bound(&id, &r, &p, BoundMode::Direct).map_err(|e| e.to_string())?;
            for (what, v) in [("lhs", rep.lhs), ("rhs", rep.rhs)] {
                if (v - half).abs() > SHARPNESS_TOL * half.max(1.0) {
                    return Err(format!("[{a}, {b}], t = {t}: {what} = {v}, expected {half}"));
                }
            }
        }
    }
    // exact: (1/4 + 1/4)(b - a) on [0, 3]
    let r = TimeScale::<Rational>::from_spec(&ScaleSpec::interval("0", "3", Backend::Rational)).unwrap();
    let p = KernelParams::new(&r, &q(0), &q(3), &q(0), &q(0)).unwrap();
    let rep = ostrowski_bound(&Function::identity(), &r, &p, BoundMode::Direct).unwrap();
    if rep.lhs != ratio(3, 2) || rep.rhs != ratio(3, 2) || !rep.equality_case {
        return Err(format!("exact [0, 3]: lhs {} rhs {}", rep.lhs, rep.rhs));
    }
    Ok("50 intervals, lhs = rhs = (b-a)/2 at t = a and t = b".into())
}

// 5: Z-slice {0..4}, f = t^2, λ = 0, t = 2
fn worked_discrete() -> Check {
    let run = tscalc(&["bound", "--scale", INTEGERS, "--fn", SQUARE, "--lambda", "0", "--t", "2"]);
    let doc: Value = serde_json::from_slice(&run.stdout).map_err(|e| e.to_string())?;
    let r = &doc["result"];
    // by hand: mean of f^σ = (1 + 4 + 9 + 16)/4 = 15/2, so lhs = |4 - 15/2|;
    // M = max Δf on [0, 4) = 7; Σ_{s=0}^{3} |K(2, s)| = 0 + 1 + 2 + 1 = 4, rhs = 7·4/4
    let want = [("lhs", "7/2"), ("M", "7"), ("rhs", "7")];
    for (k, v) in want {
        if r[k] != v {
            return Err(format!("{k} = {}, expected {v}", r[k]));
        }
    }
    if code(&run) != 0 {
        return Err(format!("exit {}", code(&run)));
    }
    Ok("lhs 7/2, M 7, rhs 7".into())
}

fn random_poly(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let degree = rng.random_range(1..=5);
    (0..=degree).map(|_| ratio(rng.random_range(-9..=9), rng.random_range(1..=4))).collect()
}

// 6: continuous specialization
fn continuous_formula() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    for n in 0..CONTINUOUS_CASES {
        let a = ratio(rng.random_range(-40..40), 4);
        let b = &a + ratio(rng.random_range(1..80), 4);
        let lambda = ratio(rng.random_range(0..=12), 12);
        let lo = &a + &lambda * (&b - &a) / q(2);
        let hi = &b - &lambda * (&b - &a) / q(2);
        let t = &lo + (&hi - &lo) * ratio(rng.random_range(0..=10), 10);
        let coeffs = random_poly(&mut rng);
        let spec = ScaleSpec::interval(&a.to_string(), &b.to_string(), Backend::Float);
        let r = TimeScale::<f64>::from_spec(&spec).unwrap();
        let f = Function::<f64>::polynomial(coeffs.iter().map(to_f64).collect());
        let (af, bf, lf, tf) = (to_f64(&a), to_f64(&b), to_f64(&lambda), to_f64(&t));
        let p = KernelParams::new(&r, &af, &bf, &lf, &tf).map_err(|e| e.to_string())?;
        let rep = ostrowski_bound(&f, &r, &p, BoundMode::Direct).map_err(|e| e.to_string())?;
        let len = bf - af;
        let centered = tf - (af + bf) / 2.0;
        let want = rep.m * (len * ((1.0 - lf).powi(2) + lf * lf) / 4.0 + centered * centered / len);
        if (rep.rhs - want).abs() > CONTINUOUS_TOL * want.abs().max(1.0) {
            return Err(format!("case {n}: rhs {} vs formula {want}", rep.rhs));
        }
    }
    Ok(format!("{CONTINUOUS_CASES} cases within {CONTINUOUS_TOL:e}"))
}

fn to_f64(x: &Rational) -> f64 {
    x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap()
}

// 7: integer specialization with nλ even
fn integer_formula() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for case in 0..INTEGER_CASES {
        let n: i64 = rng.random_range(2..=24);
        let k = rng.random_range(0..=n / 2);
        // nλ = 2k
        let lambda = ratio(2 * k, n);
        let i = rng.random_range(k..=n - k);
        let z = TimeScale::<Rational>::from_spec(&ScaleSpec::integers(0, n, Backend::Rational)).unwrap();
        let f = Function::polynomial(random_poly(&mut rng));
        let p = KernelParams::new(&z, &q(0), &q(n), &lambda, &q(i)).map_err(|e| e.to_string())?;
        let rep = ostrowski_bound(&f, &z, &p, BoundMode::FourH2).map_err(|e| e.to_string())?;
        let centered = q(i) - ratio(n + 1, 2);
        let quad = q(2) * &lambda * &lambda - q(2) * &lambda + q(1);
        let want = &rep.m / q(n) * (&centered * &centered + (quad * q(n * n) - q(1)) / q(4));
        if rep.rhs != want {
            return Err(format!("case {case}: n {n} i {i} λ {lambda}: rhs {} vs {want}", rep.rhs));
        }
        // M independently: max |Δx_j| over j = 0..n-1
        let poly = Polynomial::new(f.poly().coeffs().to_vec());
        let m = (0..n)
            .map(|j| {
                let d = poly.eval(&q(j + 1)) - poly.eval(&q(j));
                if d < q(0) {
                    -d
                } else {
                    d
                }
            })
            .max()
            .unwrap();
        if m != rep.m {
            return Err(format!("case {case}: M {} vs {m}", rep.m));
        }
    }
    Ok(format!("{INTEGER_CASES} cases exact"))
}

// 8: direct and four-h2 agree when the split points are scale points
fn mode_agreement() -> Check {
    let c = SuiteConfig::new(SEED, MODE_CASES, Backend::Rational).with_families(&ScaleFamily::DISCRETE);
    let r = single(SuiteName::ModeAgreement, &c, false)?;
    clean(&r, MODE_CASES)?;
    if r.max_residual != Some(Value::from("0")) {
        return Err(format!("residual {:?}", r.max_residual));
    }
    Ok(format!("{MODE_CASES} cases, residual 0"))
}

// 9: linearity, reversal, additivity, parts, σ rule and ∫σ = b² - a² - ∫s
fn calculus_rules() -> Check {
    let c = SuiteConfig::new(SEED, CALCULUS_CASES, Backend::Rational).with_families(&ScaleFamily::DISCRETE);
    let r = single(SuiteName::CalculusRules, &c, false)?;
    clean(&r, CALCULUS_CASES)?;
    if r.max_residual != Some(Value::from("0")) {
        return Err(format!("residual {:?}", r.max_residual));
    }
    // proof identity by explicit sums on {0, 1/2, 2, 3, 5}
    let pts: Vec<Rational> = vec![q(0), ratio(1, 2), q(2), q(3), q(5)];
    let (mut sig, mut s) = (q(0), q(0));
    for w in pts.windows(2) {
        sig += (&w[1] - &w[0]) * &w[1];
        s += (&w[1] - &w[0]) * &w[0];
    }
    if sig != q(25) - s {
        return Err("σ identity by hand".into());
    }
    Ok(format!("{CALCULUS_CASES} cases, residual 0"))
}

// 10: Grüss estimate with tight γ, Γ
fn gruss() -> Check {
    let c = SuiteConfig::new(SEED, GRUSS_CASES, Backend::Rational).with_families(&ScaleFamily::DISCRETE);
    let r = single(SuiteName::Gruss, &c, false)?;
    clean(&r, GRUSS_CASES)?;
    let margin = r.min_margin.as_ref().and_then(Value::as_str).ok_or("no margin")?;
    let m = tscalc_core::scalar::parse_rational(margin).map_err(|e| e.to_string())?;
    if to_f64(&m) < GRUSS_MIN_MARGIN {
        return Err(format!("min margin {margin}"));
    }
    let ql = TimeScale::<Rational>::from_spec(&ScaleSpec::qlattice("2", 0, 5, Backend::Rational)).unwrap();
    let id = Function::identity();
    let params = GrussParams::tight(&id, &ql, &q(1), &q(32)).unwrap();
    let rep = gruss_check(&id, &ql, &q(1), &q(32), &q(4), &params).unwrap();
    if rep.lhs != q(0) {
        return Err(format!("f = id gives lhs {}", rep.lhs));
    }
    Ok(format!("{GRUSS_CASES} cases, min margin {margin}, identity lhs 0"))
}

// 11: golden files, reproduction, exit codes
fn cli_contract() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, args) in GOLDEN {
        let (c, bytes) = tscalc_to(dir.path(), name, args);
        if c != 0 || bytes != std::fs::read(golden_path(name)).unwrap_or_default() {
            return Err(format!("{name} differs from its golden file (exit {c})"));
        }
        if name.ends_with(".json") {
            let again = dir.path().join(format!("again-{name}"));
            let run = tscalc(&["--check", golden_path(name).to_str().unwrap(), "-o", again.to_str().unwrap()]);
            if code(&run) != 0 || std::fs::read(&again).unwrap_or_default() != bytes {
                return Err(format!("{name} does not round-trip"));
            }
        }
    }
    let corrupted = code(&tscalc(&["--check", "tests/fixtures/corrupted_bound.json"]));
    let malformed = code(&tscalc(&["bound", "--scale", MALFORMED, "--fn", SQUARE, "--t", "0"]));
    if corrupted != 1 || malformed != 2 {
        return Err(format!("corrupted exit {corrupted}, malformed exit {malformed}"));
    }
    Ok(format!("{} golden files, corrupted -> 1, malformed -> 2", GOLDEN.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("1 identity exact on discrete scales", identity_exact),
        ("2 inequality on mixed float cases", inequality_float),
        ("3 closed-form h2 per family", closed_form_h2),
        ("4 classical sharpness on R", classical_sharpness),
        ("5 worked discrete case", worked_discrete),
        ("6 continuous formula", continuous_formula),
        ("7 integer formula", integer_formula),
        ("8 mode agreement", mode_agreement),
        ("9 calculus rules", calculus_rules),
        ("10 Gruss estimate", gruss),
        ("11 CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(note) => println!("PASS  {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
