//! Command-line front end: parse specs, evaluate one claim or a suite, and
//! emit a report whose embedded inputs reproduce it.
//!
//! Exit codes: 0 when everything checked holds, 1 for a violated claim or a
//! report that does not reproduce, 2 for any input or I/O error.

pub mod args;
pub mod exec;
pub mod output;
pub mod request;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::Path;

use clap::Parser;
use serde_json::Value;

use args::{Cli, OutputArgs};
use exec::{differences, execute};
use request::Request;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<tscalc_core::Error> for InputError {
    fn from(e: tscalc_core::Error) -> Self {
        InputError(e.to_string())
    }
}

/// Parses `argv`, runs it, and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match (&cli.check, &cli.command) {
        (Some(path), _) => check(path, &cli.output),
        (None, Some(command)) => Request::from_command(command).and_then(|r| evaluate(&r, &cli.output)),
        (None, None) => Err(InputError("no command given".into())),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn evaluate(request: &Request, out: &OutputArgs) -> Result<i32, InputError> {
    let report = execute(request)?;
    let bytes = output::render(&report.to_json(), out.format)?;
    output::write(&bytes, out.output.as_deref())?;
    Ok(match &report.violation {
        Some(detail) => {
            eprintln!("violation: {detail}");
            EXIT_VIOLATION
        }
        None => EXIT_OK,
    })
}

/// Re-executes a stored report from its `command` and `inputs` fields.
fn check(path: &Path, out: &OutputArgs) -> Result<i32, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("cannot read `{}`: {e}", path.display())))?;
    let stored: Value =
        serde_json::from_str(&text).map_err(|e| InputError(format!("`{}` is not JSON: {e}", path.display())))?;
    let request: Request = serde_json::from_value(serde_json::json!({
        "command": stored.get("command"),
        "inputs": stored.get("inputs"),
    }))
    .map_err(|e| InputError(format!("`{}` has no valid inputs: {e}", path.display())))?;
    let fresh = execute(&request)?.to_json();
    if out.output.is_some() {
        output::write(&output::render(&fresh, out.format)?, out.output.as_deref())?;
    }
    let diffs = differences(&stored, &fresh);
    if !diffs.is_empty() {
        eprintln!("mismatch: {} does not reproduce at {}", path.display(), diffs.join(", "));
        return Ok(EXIT_VIOLATION);
    }
    if fresh["status"] == "violation" {
        eprintln!("reproduced, but the report records a violation: {}", fresh["detail"]);
        return Ok(EXIT_VIOLATION);
    }
    eprintln!("reproduced: {}", path.display());
    Ok(EXIT_OK)
}
