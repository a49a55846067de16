use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibrecurve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fibrecurve")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn plan_million() {
    let (code, v) = json(&["plan", "--g", "1000000", "--alpha", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "plan");
    assert_eq!(v["schema"], 1);
    let plan = &v["result"]["plan"];
    assert_eq!(plan["valid"], true);
    assert_eq!(plan["k"], 9);
    assert_eq!(plan["p"], "96511");
    assert_eq!(plan["q"], 18);
    assert_eq!(plan["m_target"]["value"], "1000000000000");
}

#[test]
fn invalid_plan_is_a_negative_finding() {
    let (code, v) = json(&["plan", "--g", "3", "--alpha", "0.1"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["plan"]["valid"], false);
    assert!(v["result"]["plan"]["invalid_reason"].is_string());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["plan", "--g", "x", "--alpha", "1"][..],
        &["plan", "--g", "10", "--alpha", "-1"],
        &["plan", "--g", "1", "--alpha", "1"],
        &["surface", "--p", "0", "--q", "3"],
        &["prune", "--p", "3", "--k", "3", "--m", "41"],
        &["frobnicate"],
        &[],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn surface_summaries() {
    for (p, q, chi, b, genus) in [(3, 4, -5, 1, 3), (2, 3, -1, 1, 1), (2, 2, 0, 2, 0)] {
        let (code, v) = json(&["surface", "--p", &p.to_string(), "--q", &q.to_string()]);
        assert_eq!(code, 0);
        let s = &v["result"]["summary"];
        assert_eq!((s["chi"].as_i64(), s["boundary_components"].as_u64(), s["genus"].as_u64()), (Some(chi), Some(b), Some(genus)));
    }
}

#[test]
fn system_and_crossings_csv() {
    let curves = tmp("system.csv");
    let (code, v) = json(&["system", "--p", "3", "--k", "3", "--out", curves.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["curves"], 40);
    let text = std::fs::read_to_string(&curves).unwrap();
    assert_eq!(text.lines().count(), 41);

    let matrix = tmp("matrix.csv");
    let (code, v) = json(&["crossings", "--p", "3", "--k", "3", "--out", matrix.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!((r["total"].as_str(), r["nonzero_pairs"].as_u64()), (Some("6960"), Some(780)));
    assert_eq!((r["bound_numer"].as_str(), r["bound_denom"].as_str()), (Some("9600"), Some("1")));
    let rows: Vec<String> = std::fs::read_to_string(&matrix).unwrap().lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 780);
    let sum: u64 = rows.iter().map(|r| r.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(sum, 6960);
}

#[test]
fn prune_trace() {
    let trace = tmp("trace.json");
    let (code, v) = json(&["prune", "--p", "3", "--k", "3", "--m", "10", "--out", trace.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["removed"], 30);
    assert_eq!(r["invariants_hold"], true);
    assert_eq!(r["final_total"], "390");
    assert_eq!(r["final_average"], "26/3");
    assert_eq!(r["pruned_bound"], "7200/13");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["steps"].as_array().unwrap().len(), 30);
    assert_eq!(t["survivors"], r["survivors"]);
}

#[test]
fn bounds_sweep_csv() {
    let out = tmp("sweep.csv");
    let (code, v) = json(&[
        "bounds", "--alpha", "1", "--sweep-g-from", "1000", "--sweep-g-to", "1000000", "--sweep-g-factor", "10",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 4);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 5);
}

#[test]
fn digits_are_honoured() {
    let (_, v) = json(&["--digits", "8", "bounds", "--g", "1000", "--alpha", "1"]);
    let lo = v["result"]["report"]["theorem"]["lower"]["lo"].as_str().unwrap();
    let mantissa = lo.split('e').next().unwrap().replace(['.', '-'], "");
    assert!(mantissa.len() <= 8, "{lo}");
}

#[test]
fn verify_small_and_injected_fault() {
    let (code, v) = json(&["verify", "--suite", "small"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);

    let (code, v) = json(&["verify", "--suite", "small", "--inject-fault", "rotation"]);
    assert_eq!(code, 2);
    let checks = v["result"]["checks"].as_array().unwrap();
    let gcd = checks.iter().find(|c| c["name"] == "boundary-gcd").unwrap();
    assert_eq!(gcd["passed"], false);
}

#[test]
fn render_is_deterministic() {
    let a = run(&["render", "--p", "3", "--q", "6", "--highlight", "0:0,1,2", "--highlight", "1:3,4,5"]);
    let b = run(&["render", "--p", "3", "--q", "6", "--highlight", "0:0,1,2", "--highlight", "1:3,4,5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("data-ribbon=").count(), 18);
    assert_eq!(svg.matches("data-curve=").count(), 2);

    let file = tmp("sigma.svg");
    assert_eq!(run(&["render", "--p", "3", "--q", "6", "--out", file.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&file).unwrap().ends_with("</svg>\n"));
    // a lower set of the wrong size does not name a curve of Σ(3,6)
    assert_eq!(run(&["render", "--p", "3", "--q", "6", "--highlight", "0:0,1"]).status.code(), Some(1));
}
