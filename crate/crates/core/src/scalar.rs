//! Scalar backends.
//!
//! Every computation in the crate is generic over [`Scalar`]. Two families of
//! backends exist: exact rationals ([`Rational`]) where every comparison is
//! exact, and binary floats (`f64`, `f32`) which carry a nonzero comparison
//! tolerance. Mixing backends is impossible by construction; conversion goes
//! through [`Scalar::from_rational`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Rational,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Backend::Rational),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number type the calculus is written against.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static {
    const BACKEND: Backend;

    /// Absolute comparison tolerance used for membership and equality tests.
    /// Zero for exact backends.
    fn default_tolerance() -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses a literal: `"p/q"`, an integer, or a decimal such as `"-1.25e-3"`.
    fn parse_literal(text: &str) -> Result<Self>;

    /// Report encoding: `"p/q"` strings for exact values, JSON numbers for floats.
    fn to_json(&self) -> serde_json::Value;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every backend represents i64")
    }

    /// Lossy for exact backends; used only for tolerances and iteration caps.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite float")
    }

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }

    fn approx_eq(&self, other: &Self, tol: &Self) -> bool {
        if Self::is_exact() {
            self == other
        } else {
            (self.clone() - other.clone()).abs() <= *tol
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    /// Text form used in CSV output and diagnostics.
    fn to_text(&self) -> String {
        match self.to_json() {
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        }
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn default_tolerance() -> Self {
        Rational::zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn default_tolerance() -> Self {
        1e-12
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_literal(text: &str) -> Result<Self> {
        parse_float(text)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }
}

impl Scalar for f32 {
    const BACKEND: Backend = Backend::Float;

    fn default_tolerance() -> Self {
        1e-5
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        parse_float(text).map(|x| x as f32)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(f64::from(*self)).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }
}

/// Exact parse of `"p/q"`, integer, or decimal (optionally with exponent) text.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if negative { -value } else { value })
}

fn parse_float(text: &str) -> Result<f64> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid number `{text}`"));
    let value = if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| bad())?;
        let den: f64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0.0 {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        num / den
    } else {
        s.parse().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Numeric literal as it appears in input documents: a string (`"1/3"`) or a
/// bare JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumLit {
    Text(String),
    Number(serde_json::Number),
}

impl NumLit {
    pub fn parse<S: Scalar>(&self) -> Result<S> {
        match self {
            NumLit::Text(t) => S::parse_literal(t),
            NumLit::Number(n) => {
                if S::is_exact() && !(n.is_i64() || n.is_u64()) {
                    return Err(Error::Parse(format!(
                        "non-integer JSON number {n} in rational backend; write it as a \"p/q\" string"
                    )));
                }
                S::parse_literal(&n.to_string())
            }
        }
    }

    pub fn from_scalar<S: Scalar>(x: &S) -> Self {
        match x.to_json() {
            serde_json::Value::Number(n) => NumLit::Number(n),
            serde_json::Value::String(s) => NumLit::Text(s),
            other => NumLit::Text(other.to_string()),
        }
    }
}

impl From<&str> for NumLit {
    fn from(s: &str) -> Self {
        NumLit::Text(s.to_string())
    }
}

/// Shorthand for building exact rationals in code and tests.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int<S: Scalar>(n: i64) -> S {
    S::from_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), ratio(-3, 20));
        assert_eq!(parse_rational("12").unwrap(), ratio(12, 1));
        assert_eq!(parse_rational("2e3").unwrap(), ratio(2000, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_literal("0.5").unwrap(), 0.5);
        assert!(f64::parse_literal("inf").is_err());
    }

    #[test]
    fn rational_json_is_string() {
        assert_eq!(ratio(7, 2).to_json(), serde_json::json!("7/2"));
        assert_eq!(ratio(7, 1).to_json(), serde_json::json!("7"));
        assert_eq!(0.5f64.to_json(), serde_json::json!(0.5));
    }

    #[test]
    fn numlit_rejects_fractional_json_numbers_for_rationals() {
        let lit: NumLit = serde_json::from_str("0.5").unwrap();
        assert!(lit.parse::<Rational>().is_err());
        assert_eq!(lit.parse::<f64>().unwrap(), 0.5);
        let lit: NumLit = serde_json::from_str("3").unwrap();
        assert_eq!(lit.parse::<Rational>().unwrap(), ratio(3, 1));
    }

    #[test]
    fn tolerances() {
        assert!(Rational::default_tolerance().is_zero());
        assert!(f64::default_tolerance() > 0.0);
        assert!(f32::default_tolerance() > 0.0);
    }
}
