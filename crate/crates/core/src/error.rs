use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("time scale has no components")]
    EmptyScale,
    #[error("components overlap: {0}")]
    Overlap(String),
    #[error("interval [{lo}, {hi}] requires lo < hi")]
    InvalidInterval { lo: String, hi: String },
    #[error("q-lattice requires q > 1 and m <= n, got q = {q}, m = {m}, n = {n}")]
    InvalidQLattice { q: String, m: i64, n: i64 },
    #[error("{0} is not a point of the time scale")]
    NotInScale(String),
    #[error("{0} is a left-scattered maximum; the delta derivative is undefined there")]
    NotInKappa(String),
    #[error("requires a < b, got a = {a}, b = {b}")]
    DegenerateRange { a: String, b: String },
    #[error("lambda = {0} lies outside [0, 1]")]
    LambdaOutOfRange(String),
    #[error("t = {t} lies outside the admissible window [{lo}, {hi}]")]
    OutsideWindow { t: String, lo: String, hi: String },
    #[error("admissible window [{lo}, {hi}] contains no point of the time scale")]
    EmptyWindow { lo: String, hi: String },
    #[error("s = {s} lies outside [{a}, {b}]")]
    KernelArgument { s: String, a: String, b: String },
    #[error("split point {0} is not in the scale and the scale has no closed form for h2")]
    SplitPointOffScale(String),
    #[error("sharpness integral upper limit {0} is not a point of the scale")]
    SharpnessLimitOffScale(String),
    #[error("gamma = {gamma} exceeds Gamma = {big_gamma}")]
    GammaOrder { gamma: String, big_gamma: String },
    #[error("delta derivative range [{lo}, {hi}] is not inside [gamma, Gamma] = [{gamma}, {big_gamma}]")]
    GrussHypothesis { lo: String, hi: String, gamma: String, big_gamma: String },
    #[error("midpoint (a + b)/2 = {0} is not a point of the scale")]
    MidpointOffScale(String),
    #[error("special case `{kind}` needs {what}")]
    SpecialCaseParameter { kind: String, what: String },
    #[error("closed form for h_{k} is not available (only k <= 2 on canonical scales)")]
    NoClosedForm { k: usize },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid suite configuration: {0}")]
    Config(String),
}

pub(crate) fn text<S: std::fmt::Display>(x: &S) -> String {
    x.to_string()
}
