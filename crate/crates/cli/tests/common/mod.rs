#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const INTEGERS: &str = "tests/fixtures/integers_0_4.json";
pub const INTEGERS_FLOAT: &str = "tests/fixtures/integers_float.json";
pub const REALS: &str = "tests/fixtures/reals_0_1.json";
pub const REALS_FLOAT: &str = "tests/fixtures/reals_float.json";
pub const QLATTICE: &str = "tests/fixtures/qlattice_2.json";
pub const HYBRID: &str = "tests/fixtures/hybrid.json";
pub const SQUARE: &str = "tests/fixtures/square.json";
pub const CUBIC: &str = "tests/fixtures/cubic.json";
pub const MALFORMED: &str = "tests/fixtures/malformed_scale.json";

/// Golden reports: file name under `tests/golden` and the arguments that
/// produce it.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("bound_integers.json", &["bound", "--scale", INTEGERS, "--fn", SQUARE, "--lambda", "0", "--t", "2"]),
    (
        "bound_simpson.json",
        &["bound", "--scale", REALS, "--fn", CUBIC, "--kind", "simpson", "--mode", "four-h2-closed-form"],
    ),
    ("bound_float.json", &["bound", "--scale", REALS_FLOAT, "--fn", CUBIC, "--lambda", "1/4", "--t", "0.75"]),
    (
        "bound_qlattice.json",
        &["bound", "--scale", QLATTICE, "--fn", SQUARE, "--lambda", "0", "--t", "4", "--mode", "four-h2"],
    ),
    ("identity_qlattice.json", &["identity", "--scale", QLATTICE, "--fn", CUBIC, "--lambda", "1/3", "--t", "4"]),
    ("h2_integers.json", &["h2", "--scale", INTEGERS, "--t", "4", "--s", "1"]),
    ("h2_hybrid.json", &["h2", "--scale", HYBRID, "--t", "4", "--s", "0"]),
    ("sharpness_reals.json", &["sharpness", "--scale", REALS, "--lambda", "1/2"]),
    ("sharpness_integers.json", &["sharpness", "--scale", INTEGERS, "--lambda", "1/2"]),
    ("gruss_hybrid.json", &["gruss", "--scale", HYBRID, "--fn", CUBIC, "--t", "3/2"]),
    ("suite_identity.json", &["suite", "--name", "identity", "--seed", "7", "--cases", "25"]),
    (
        "bound_integers.csv",
        &["bound", "--scale", INTEGERS, "--fn", SQUARE, "--lambda", "0", "--t", "2", "--format", "csv"],
    ),
    ("suite_all.csv", &["suite", "--name", "all", "--seed", "3", "--cases", "10", "--format", "csv"]),
];

/// Four-h2 closed form with split points 19/4 and 49/4 between lattice
/// points: rhs 174/5 < lhs 239/4, a genuine violation.
pub const QLATTICE_OFF_LATTICE: &[&str] =
    &["bound", "--scale", QLATTICE, "--fn", SQUARE, "--lambda", "1/2", "--t", "8", "--mode", "four-h2"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(name)
}

pub fn tscalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tscalc"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("TSCALC_SEED")
        .output()
        .expect("binary runs")
}

/// Runs with `-o <dir>/<name>` and returns the exit code and written bytes.
pub fn tscalc_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Vec<u8>) {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().expect("utf-8 temp path").to_string();
    full.push("-o");
    full.push(&p);
    let out = tscalc(&full);
    let bytes = std::fs::read(&path).unwrap_or_default();
    (out.status.code().expect("exit code"), bytes)
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}
