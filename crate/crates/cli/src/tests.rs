use std::path::Path;

use serde_json::Value;

use super::*;

struct Output {
    code: u8,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn verify(args: &[&str]) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("eqg-verify").chain(args.iter().copied()), &mut stdout, &mut stderr);
    Output { code, stdout, stderr }
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn empty_suite_list_is_an_empty_passing_report() {
    let out = verify(&[]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn report_has_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = verify(&["--samples", "3", "--report", path.to_str().unwrap(), "theta", "classical"]);
    assert_eq!(out.code, 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&path);
    let meta = &v["metadata"];
    for key in ["tau", "hbar", "jet_order", "seed", "version", "runtime_s"] {
        assert!(!meta[key].is_null(), "metadata.{key} missing");
    }
    assert_eq!(meta["tau"], serde_json::json!([0.3, 1.1]));
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "paper_anchor", "params", "residual", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "check field {key} missing in {c}");
        }
        assert!(!c["paper_anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn failing_check_exits_one() {
    // the printed-orientation R⁺ records fail
    let out = verify(&["--samples", "2", "dybe"]);
    assert_eq!(out.code, 1);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "tau = 0.3\nthis line is not a pair\n").unwrap();
    assert_eq!(verify(&["--config", bad.to_str().unwrap(), "theta"]).code, 2);
    assert_eq!(verify(&["--config", dir.path().join("missing").to_str().unwrap()]).code, 2);
    assert_eq!(verify(&["--tau", "0.3,-1", "theta"]).code, 2);
    assert_eq!(verify(&["--jet-order", "many"]).code, 2);
    assert_eq!(verify(&["nosuchsuite"]).code, 2);
    assert_eq!(verify(&["--bogus-flag"]).code, 2);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep settings\nseed = 11\njet_order = 4\nsamples = 2\ntol-tier = strict\n").unwrap();
    let path = dir.path().join("r.json");
    let out = verify(&["--config", cfg.to_str().unwrap(), "--seed", "12", "--report", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let meta = &report(&path)["metadata"];
    assert_eq!(meta["seed"], 12);
    assert_eq!(meta["jet_order"], 4);
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (p, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec!["--samples", "3", "--report", p.to_str().unwrap(), "rll", "gauge"];
        args.extend(extra);
        verify(&args);
    }
    let strip = |v: Value| v["checks"].clone();
    assert_eq!(strip(report(&a)), strip(report(&b)));
}
