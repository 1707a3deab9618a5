use causal_core::measurements::computational_dpovm;
use std::path::Path;
use std::process::{Command, Output};

fn icocert(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_icocert"));
    cmd.args(args).env_remove(causal_cli::OUT_ENV);
    if let Some(dir) = out {
        cmd.env(causal_cli::OUT_ENV, dir);
    }
    cmd.output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    icocert(args, None).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["list"]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["certify", "p2f", "shift"]), 0);
    assert_eq!(code(&["certify", "p2f", "computational"]), 1);
    assert_eq!(code(&["certify", "p2f", "computational", "--expect", "separable"]), 0);
    assert_eq!(code(&["check", "fixed-point(bipartite_loop)"]), 1);
    assert_eq!(code(&["build"]), 2);
    assert_eq!(code(&["build", "no-such-process"]), 2);
    assert_eq!(code(&["check", "no-such-check"]), 2);
    assert_eq!(code(&["bound", "exact", "shift"]), 2);
    assert_eq!(code(&["game", "lugano", "lugano", "--ensemble", "shift"]), 2);
    assert_eq!(code(&["--tol", "0", "certify", "p2f", "shift"]), 2);
}

#[test]
fn inconclusive_exit_code() {
    // Two wires do not fit the global-past/two-party/global-future shape.
    let dir = tempfile::tempdir().unwrap();
    let d = computational_dpovm(&["X".into(), "Y".into()]).unwrap();
    std::fs::write(dir.path().join("d.json"), d.to_json()).unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "measurement = \"d.json\"\nchecks = [\"separability-p2f\"]\n").unwrap();
    let out = icocert(&["check", path.to_str().unwrap()], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(3), "{text}");
    assert!(text.contains("[INCONCLUSIVE] separability-p2f"));
}

#[test]
fn writes_report_and_artifacts_to_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = icocert(&["build", "switch", "--validate"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert_eq!(report, String::from_utf8(out.stdout).unwrap());
    assert!(report.contains("[PASS] validate"));
    assert!(dir.path().join("process.json").is_file());

    let second = tempfile::tempdir().unwrap();
    let out = icocert(&["--out", second.path().to_str().unwrap(), "build", "switch", "--validate"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(second.path().join("report.txt")).unwrap(), report);
}

#[test]
fn seed_is_reported() {
    let out = icocert(&["--seed", "11", "build", "comb", "--validate"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("report: build comb\nseed: 11\n"), "{text}");
}
