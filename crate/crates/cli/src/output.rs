//! Report rendering and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;
use tempfile::NamedTempFile;

use crate::args::Format;
use crate::InputError;

/// CSV columns per command, as (header, JSON pointer into the report).
fn columns(command: &str) -> &'static [(&'static str, &'static str)] {
    match command {
        "bound" => &[
            ("backend", "/result/backend"),
            ("a", "/inputs/a"),
            ("b", "/inputs/b"),
            ("lambda", "/inputs/lambda"),
            ("t", "/inputs/t"),
            ("mode", "/inputs/mode"),
            ("kind", "/inputs/kind"),
            ("lhs", "/result/lhs"),
            ("rhs", "/result/rhs"),
            ("margin", "/result/margin"),
            ("M", "/result/M"),
            ("equality_case", "/result/equality_case"),
            ("sharpness_condition", "/result/sharpness_condition"),
            ("status", "/status"),
        ],
        "identity" => &[
            ("backend", "/result/backend"),
            ("a", "/inputs/a"),
            ("b", "/inputs/b"),
            ("lambda", "/inputs/lambda"),
            ("t", "/inputs/t"),
            ("lhs", "/result/lhs"),
            ("rhs", "/result/rhs"),
            ("residual", "/result/residual"),
            ("status", "/status"),
        ],
        "h2" => &[
            ("backend", "/result/backend"),
            ("k", "/inputs/k"),
            ("t", "/inputs/t"),
            ("s", "/inputs/s"),
            ("value", "/result/value"),
            ("closed_form", "/result/closed_form"),
            ("family", "/result/family"),
            ("status", "/status"),
        ],
        "sharpness" => &[
            ("backend", "/result/backend"),
            ("a", "/inputs/a"),
            ("b", "/inputs/b"),
            ("lambda", "/inputs/lambda"),
            ("result", "/result/result"),
            ("t", "/result/t"),
            ("equality_case", "/result/equality/equality_case"),
            ("status", "/status"),
        ],
        "gruss" => &[
            ("backend", "/result/backend"),
            ("a", "/inputs/a"),
            ("b", "/inputs/b"),
            ("t", "/inputs/t"),
            ("gamma", "/result/gamma"),
            ("Gamma", "/result/Gamma"),
            ("lhs", "/result/lhs"),
            ("rhs", "/result/rhs"),
            ("margin", "/result/margin"),
            ("status", "/status"),
        ],
        _ => &[],
    }
}

/// Suite reports flatten one row per suite.
const SUITE_COLUMNS: [(&str, &str); 9] = [
    ("name", "/name"),
    ("backend", "/backend"),
    ("seed", "/seed"),
    ("cases_run", "/cases_run"),
    ("skipped", "/skipped"),
    ("max_residual", "/max_residual"),
    ("min_margin", "/min_margin"),
    ("violations", "/violations"),
    ("verdict", "/verdict"),
];

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(a)) => a.len().to_string(),
        Some(other) => other.to_string(),
    }
}

pub fn render(doc: &Value, format: Format) -> Result<Vec<u8>, InputError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc).expect("values serialize");
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| InputError(format!("csv: {e}"));
            if doc["command"] == "suite" {
                w.write_record(SUITE_COLUMNS.iter().map(|c| c.0)).map_err(csv_err)?;
                for s in doc["result"]["suites"].as_array().into_iter().flatten() {
                    w.write_record(SUITE_COLUMNS.iter().map(|c| cell(s.pointer(c.1)))).map_err(csv_err)?;
                }
            } else {
                let cols = columns(doc["command"].as_str().unwrap_or_default());
                w.write_record(cols.iter().map(|c| c.0)).map_err(csv_err)?;
                w.write_record(cols.iter().map(|c| cell(doc.pointer(c.1)))).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| InputError(format!("csv: {e}")))
        }
    }
}

/// Writes to `path` via a temporary file in the same directory and a rename,
/// or to stdout.
pub fn write(bytes: &[u8], path: Option<&Path>) -> Result<(), InputError> {
    let io_err = |e: io::Error| InputError(format!("writing output: {e}"));
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(bytes).map_err(io_err)?;
        return out.flush().map_err(io_err);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
