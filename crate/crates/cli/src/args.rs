//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tscalc_core::verifier::ScaleFamily;
use tscalc_core::Backend;

#[derive(Debug, Parser)]
#[command(name = "tscalc", version, about = "Delta calculus on time scales and Ostrowski-type bounds")]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
pub struct Cli {
    /// Re-execute a report from its embedded inputs and compare the result.
    /// With `-o`, the re-executed report is written there as well.
    #[arg(long, value_name = "REPORT")]
    pub check: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ostrowski-type bound for f at (a, b, λ, t).
    Bound(BoundArgs),
    /// Both sides of the Montgomery identity.
    Identity(PointArgs),
    /// h_k(t, s) by recursion, cross-checked against the closed form.
    H2(H2Args),
    /// Sharpness condition for λ, with the predicted equality checked.
    Sharpness(SharpnessArgs),
    /// Grüss-type estimate.
    Gruss(GrussArgs),
    /// Randomized verification suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(short = 'o', long = "output", value_name = "PATH", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Scale document plus the range inside it.
#[derive(Debug, Clone, Args)]
pub struct ScaleArgs {
    /// Scale spec: a file path or inline JSON.
    #[arg(long)]
    pub scale: String,
    /// Overrides the backend; must agree with the spec if it names one.
    #[arg(long)]
    pub backend: Option<Backend>,
    /// Left end (default: scale minimum).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Right end (default: scale maximum).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub scale: ScaleArgs,
    /// Function spec: a file path or inline JSON.
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, default_value = "direct")]
    pub mode: String,
    /// Named specialization; pins λ and/or t.
    #[arg(long)]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, default_value = "0")]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Debug, Clone, Args)]
pub struct H2Args {
    #[arg(long)]
    pub scale: String,
    #[arg(long)]
    pub backend: Option<Backend>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long)]
    pub lambda: String,
}

#[derive(Debug, Clone, Args)]
pub struct GrussArgs {
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    /// Lower bound for f^Δ (default: tight).
    #[arg(long, requires = "big_gamma", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Upper bound for f^Δ (default: tight).
    #[arg(long = "Gamma", id = "big_gamma", requires = "gamma", allow_hyphen_values = true)]
    pub big_gamma: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    pub name: String,
    #[arg(long, env = "TSCALC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value = "rational")]
    pub backend: Backend,
    /// Comma-separated subset of scale families.
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    pub families: Vec<ScaleFamily>,
    #[arg(long)]
    pub lambda_grid_only: bool,
    #[arg(long)]
    pub fixed_lambda: Option<String>,
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
}

fn parse_family(s: &str) -> Result<ScaleFamily, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
        let names: Vec<String> = ScaleFamily::ALL
            .iter()
            .map(|f| serde_json::to_value(f).expect("unit variant").as_str().unwrap_or_default().to_string())
            .collect();
        format!("unknown family `{s}` (expected one of {})", names.join(", "))
    })
}
