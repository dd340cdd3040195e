//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails
//! if any criterion fails. Thresholds live here, not in the suites.

use std::process::Command;
use std::time::{Duration, Instant};

use eqg_core::verify::{run_single, CheckRecord, Suite, VerifyConfig};
use serde_json::Value;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(suite: Suite) -> (Vec<CheckRecord>, Duration) {
    let start = Instant::now();
    let recs = run_single(&VerifyConfig::default(), suite).expect("default configuration is valid");
    (recs, start.elapsed())
}

/// Every named record exists and its residual is below `tol`.
fn below(recs: &[CheckRecord], names: &[&str], tol: f64) -> Result<usize, String> {
    let mut seen = 0;
    for name in names {
        let hits: Vec<_> = recs.iter().filter(|r| r.name == *name).collect();
        if hits.is_empty() {
            return Err(format!("{name} missing"));
        }
        for r in hits {
            match r.residual {
                Some(v) if v < tol => seen += 1,
                Some(v) => return Err(format!("{name} residual {v:.3e} >= {tol:.0e}")),
                None => return Err(format!("{name} errored: {}", r.params.get("error").unwrap_or(&Value::Null))),
            }
        }
    }
    Ok(seen)
}

fn within(limit: Duration, took: Duration) -> Result<(), String> {
    if took < limit {
        Ok(())
    } else {
        Err(format!("runtime {took:.2?} exceeds {limit:.0?}"))
    }
}

fn outcome(parts: Vec<Result<String, String>>) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in parts {
        match p {
            Ok(s) if s.is_empty() => {}
            Ok(s) => notes.push(s),
            Err(s) => {
                pass = false;
                notes.push(s);
            }
        }
    }
    Outcome { pass, detail: notes.join("; ") }
}

fn ok_count(r: Result<usize, String>) -> Result<String, String> {
    r.map(|n| format!("{n} records"))
}

fn theta_axioms() -> Outcome {
    let (recs, took) = timed(Suite::Theta);
    let names = ["theta:derivative_at_zero", "theta:oddness", "theta:period_one", "theta:period_tau"];
    let taus = recs.iter().filter(|r| r.name == "theta:period_tau").count();
    let samples =
        recs.iter().find(|r| r.name == "theta:oddness").and_then(|r| r.params.get("points").and_then(Value::as_u64));
    outcome(vec![
        ok_count(below(&recs, &names, 1e-12)),
        if taus == 3 { Ok(String::new()) } else { Err(format!("{taus} values of tau")) },
        if samples == Some(100) { Ok(String::new()) } else { Err(format!("samples {samples:?}")) },
        within(Duration::from_secs(1), took).map(|_| format!("{took:.2?}")),
    ])
}

fn dybe() -> Outcome {
    let (recs, took) = timed(Suite::Dybe);
    let mut parts = Vec::new();
    for v in ["plus", "minus", "bar"] {
        parts.push(below(&recs, &[&format!("dybe:{v}:numeric")], 1e-9).map(|_| String::new()));
        parts.push(below(&recs, &[&format!("dybe:{v}:jet")], 1e-8).map(|_| String::new()));
    }
    parts.push(within(Duration::from_secs(30), took).map(|_| format!("{took:.2?}")));
    outcome(parts)
}

fn classical() -> Outcome {
    let (recs, took) = timed(Suite::Classical);
    outcome(vec![
        ok_count(below(&recs, &["classical:offdiagonal", "classical:diagonal_scalar"], 1e-10)),
        within(Duration::from_secs(5), took).map(|_| format!("{took:.2?}")),
    ])
}

fn spaces() -> Outcome {
    let (recs, _) = timed(Suite::Spaces);
    let decay = recs.iter().find(|r| r.name == "spaces:kernel_decay");
    let monotone = match decay {
        Some(r) if r.pass => Ok(format!("decay {}", r.params.get("mean_residuals").unwrap_or(&Value::Null))),
        Some(r) => Err(format!("kernel residuals not decreasing: {}", Value::Object(r.params.clone()))),
        None => Err("spaces:kernel_decay missing".into()),
    };
    let n40 = recs.iter().find(|r| r.name == "spaces:pairing").and_then(|r| r.params.get("N").and_then(Value::as_u64));
    outcome(vec![
        ok_count(below(&recs, &["spaces:pairing", "spaces:pairing_l0"], 1e-10)),
        ok_count(below(&recs, &["spaces:kernel_sum", "spaces:kernel_l0"], 1e-8)),
        if n40 == Some(40) { Ok(String::new()) } else { Err(format!("pairing at N={n40:?}")) },
        monotone,
    ])
}

fn rll_det() -> Outcome {
    let (rll, _) = timed(Suite::Rll);
    let (det, _) = timed(Suite::Det);
    let scalar = det
        .iter()
        .find(|r| r.name == "det:fundamental_offscalar")
        .and_then(|r| r.params.get("scalar_first_sample").cloned());
    outcome(vec![
        below(&rll, &["rll:numeric"], 1e-9).map(|_| String::new()),
        below(&det, &["det:fundamental_offscalar"], 1e-9).map(|_| String::new()),
        scalar.map(|s| format!("scalar {s}")).ok_or_else(|| "scalar value not reported".to_string()),
    ])
}

fn gauge() -> Outcome {
    let (recs, _) = timed(Suite::Gauge);
    let order = recs
        .iter()
        .find(|r| r.name == "gauge:functional_equation")
        .and_then(|r| r.params.get("jet_order").and_then(Value::as_u64));
    outcome(vec![
        ok_count(below(&recs, &["gauge:functional_equation"], 1e-9)),
        if order.is_some_and(|o| o >= 3) { Ok(String::new()) } else { Err(format!("order {order:?}")) },
    ])
}

fn theorem() -> Outcome {
    let (recs, took) = timed(Suite::Lops);
    let mut parts: Vec<_> = ["lops:plus", "lops:minus", "lops:mixed"]
        .iter()
        .map(|n| below(&recs, &[n], 1e-8).map(|_| String::new()))
        .collect();
    let samples =
        recs.iter().find(|r| r.name == "lops:plus").and_then(|r| r.params.get("samples").and_then(Value::as_u64));
    parts.push(if samples == Some(10) { Ok(String::new()) } else { Err(format!("samples {samples:?}")) });
    parts.push(within(Duration::from_secs(120), took).map(|_| format!("{took:.2?}")));
    outcome(parts)
}

fn representation() -> Outcome {
    let (cur, _) = timed(Suite::Currents);
    let (half, _) = timed(Suite::HalfCurrents);
    let ratios =
        ["currents:rel_k", "currents:k_plus_e", "currents:k_minus_e", "currents:k_plus_f", "currents:k_minus_f"];
    let lemma: Vec<String> =
        ["e", "f"].iter().flat_map(|k| ["++", "+-", "-+", "--"].map(|s| format!("halfcurrents:{k}:{s}"))).collect();
    let lemma_refs: Vec<&str> = lemma.iter().map(String::as_str).collect();
    let readings: Vec<String> = half
        .iter()
        .filter(|r| lemma.contains(&r.name))
        .map(|r| {
            format!(
                "{}={}",
                &r.name["halfcurrents:".len()..],
                r.params.get("vanishing_reading").and_then(Value::as_str).unwrap_or("?")
            )
        })
        .collect();
    let recorded = if readings.len() == 8 && !readings.iter().any(|r| r.ends_with("=none") || r.ends_with('?')) {
        Ok(readings.join(" "))
    } else {
        Err(format!("readings {readings:?}"))
    };
    outcome(vec![
        below(&cur, &ratios, 1e-9).map(|_| String::new()),
        below(&cur, &["currents:e_f_smeared"], 1e-8).map(|_| String::new()),
        below(&half, &lemma_refs, 1e-8).map(|_| String::new()),
        recorded,
    ])
}

fn full_run() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_eqg-verify"))
        .args(["--report", path.to_str().unwrap(), "all"])
        .output()
        .expect("binary runs");
    let took = start.elapsed();
    let report: Value =
        std::fs::read_to_string(&path).ok().and_then(|s| serde_json::from_str(&s).ok()).unwrap_or(Value::Null);
    let checks = report["checks"].as_array().cloned().unwrap_or_default();
    let unanchored = checks.iter().filter(|c| c["paper_anchor"].as_str().is_none_or(str::is_empty)).count();
    let failed: Vec<&str> = checks.iter().filter(|c| c["pass"] != true).filter_map(|c| c["name"].as_str()).collect();
    outcome(vec![
        match out.status.code() {
            Some(0) => Ok(String::new()),
            code => Err(format!("exit {code:?}, failing: {}", failed.join(","))),
        },
        if !checks.is_empty() && unanchored == 0 {
            Ok(format!("{} records", checks.len()))
        } else {
            Err(format!("{unanchored} of {} records lack an anchor", checks.len()))
        },
        within(Duration::from_secs(300), took).map(|_| format!("{took:.2?}")),
    ])
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 theta axioms", theta_axioms),
        ("2 dynamical Yang-Baxter", dybe),
        ("3 classical limit", classical),
        ("4 dual bases and kernels", spaces),
        ("5 RLL and determinant", rll_det),
        ("6 gauge function", gauge),
        ("7 L-operator relations", theorem),
        ("8 representation relations", representation),
        ("9 full default suite", full_run),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} [{:.2?}] {}", start.elapsed(), o.detail);
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {}", failed.join(", "));
}
