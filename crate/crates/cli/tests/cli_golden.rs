//! Every command against a checked-in report. Set `TSCALC_BLESS=1` to
//! rewrite the golden files after an intentional format change.

mod common;

use common::*;

#[test]
fn commands_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let bless = std::env::var_os("TSCALC_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN {
        let (code, bytes) = tscalc_to(dir.path(), name, args);
        assert_eq!(code, 0, "{name}: {args:?}");
        let golden = golden_path(name);
        if bless {
            std::fs::write(&golden, &bytes).unwrap();
            continue;
        }
        let expected = std::fs::read(&golden).unwrap_or_else(|_| panic!("missing golden file {name}"));
        if expected != bytes {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "output differs from golden: {mismatched:?}");
}

#[test]
fn stdout_and_file_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = GOLDEN[0].1;
    let (_, file) = tscalc_to(dir.path(), "r.json", args);
    let out = tscalc(args);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, file);
}
