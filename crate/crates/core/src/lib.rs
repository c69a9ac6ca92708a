//! Time-scale calculus and generalized Ostrowski bounds.
//!
//! A time scale is a nonempty closed subset of the reals; here a finite union
//! of closed intervals and isolated points. The crate provides the jump
//! operators, the delta derivative and integral, the monomials `h_k`, the
//! Montgomery identity with a `λ`-weighted kernel, the resulting
//! Ostrowski-type bound with its sharpness condition, and a randomized
//! verifier that checks all of it against independent oracles.
//!
//! Everything is generic over [`Scalar`]: use [`Rational`] for exact checks or
//! `f64` for floating point. The aliases below fix the common choices.

pub mod calculus;
pub mod error;
pub mod function;
pub mod hk;
pub mod ostrowski;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod timescale;
pub mod verifier;

pub use calculus::{delta_derivative, delta_integral, Integrand};
pub use error::{Error, Result};
pub use function::{Function, FunctionSpec};
pub use hk::{h2_closed_form, h_k, HkMethod, HkValue};
pub use ostrowski::{
    gruss_check, kernel, m_sup, montgomery_sides, ostrowski_bound, sharpness_condition, special_case_bound, BoundMode,
    BoundReport, GrussParams, KernelParams, ReportMode, SpecialKind,
};
pub use poly::Polynomial;
pub use scalar::{Backend, NumLit, Rational, Scalar};
pub use timescale::{Classification, Family, ScaleSpec, TimeScale};

pub type RationalScale = TimeScale<Rational>;
pub type FloatScale = TimeScale<f64>;
pub type RationalFunction = Function<Rational>;
pub type FloatFunction = Function<f64>;
pub type RationalReport = BoundReport<Rational>;
pub type FloatReport = BoundReport<f64>;
