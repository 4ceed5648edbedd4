use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenes() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes")
}

fn dicrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicrit")).args(args).output().expect("binary runs")
}

fn scene_arg(name: &str) -> String {
    scenes().join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn entry<'a>(report: &'a Value, name: &str) -> Option<&'a str> {
    report["entries"].as_array()?.iter().find(|e| e["name"] == name)?["value"].as_str()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dicrit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn every_shipped_scene_passes() {
    let mut names: Vec<PathBuf> = std::fs::read_dir(scenes())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    names.sort();
    assert!(names.len() >= 10);
    for p in names {
        let out = dicrit(&["invariants", "--oracle", "--scene", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}:\n{}{}", p.display(), String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn wrong_expectation_exits_one() {
    let text = std::fs::read_to_string(scenes().join("genzmer.json")).unwrap();
    let p = scratch("wrong.json", &text.replacen("\"value\": \"12\"", "\"value\": \"13\"", 1));
    let out = dicrit(&["--format", "json", "invariants", "--scene", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["passed"], false);
    let failed: Vec<&str> = r["checks"].as_array().unwrap().iter().filter(|c| c["holds"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, vec!["expected mu"]);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(dicrit(&["invariants", "--scene", "/nonexistent/scene.json"]).status.code(), Some(2));
    let p = scratch("incomplete.json", r#"{"kind": "combinatorial"}"#);
    assert_eq!(dicrit(&["invariants", "--scene", p.to_str().unwrap()]).status.code(), Some(2));
    let p = scratch("unknown.json", r#"{"kind": "combinatorial", "blowups": [[]], "colour": 1}"#);
    assert_eq!(dicrit(&["invariants", "--scene", p.to_str().unwrap()]).status.code(), Some(2));
    let p = scratch("offorigin.json", r#"{"kind": "polynomial", "polynomial": {"f": "x + 1"}}"#);
    assert_eq!(dicrit(&["invariants", "--scene", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dicrit(&["resolve", "--scene", &scene_arg("genzmer.json")]).status.code(), Some(2));
}

#[test]
fn extension_bound_exits_three() {
    let s = scene_arg("conjugate-tangents-polynomial.json");
    let out = dicrit(&["invariants", "--max-ext-degree", "1", "--scene", &s]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(dicrit(&["invariants", "--max-ext-degree", "2", "--scene", &s]).status.code(), Some(0));
}

#[test]
fn replay_of_a_polynomial_pencil_reproduces_it() {
    for name in ["genzmer-polynomial.json", "szawlowski-polynomial.json"] {
        let replay = dicrit(&["--format", "json", "resolve", "--scene", &scene_arg(name)]);
        assert_eq!(replay.status.code(), Some(0));
        let p = scratch(&format!("replay-{name}"), std::str::from_utf8(&replay.stdout).unwrap());
        let direct = json(&dicrit(&["--format", "json", "pencil", "--scene", &scene_arg(name)]));
        let replayed = json(&dicrit(&["--format", "json", "pencil", "--scene", p.to_str().unwrap()]));
        assert_eq!(replayed["passed"], true);
        let mut shared = 0;
        for e in replayed["entries"].as_array().unwrap() {
            let n = e["name"].as_str().unwrap();
            if let Some(v) = entry(&direct, n) {
                assert_eq!(Some(v), e["value"].as_str(), "{name}: entry {n}");
                shared += 1;
            }
        }
        assert!(shared >= 15, "{name}: only {shared} shared entries");
    }
}

#[test]
fn replay_of_a_single_curve_reproduces_mu() {
    let replay = dicrit(&["--format", "json", "resolve", "--scene", &scene_arg("cusp-polynomial.json")]);
    let p = scratch("replay-cusp.json", std::str::from_utf8(&replay.stdout).unwrap());
    let r = json(&dicrit(&["--format", "json", "invariants", "--scene", p.to_str().unwrap()]));
    assert_eq!(entry(&r, "mu(f)"), Some("2"));
    assert_eq!(entry(&r, "multiplicities(f)"), Some("(2,1,1)"));
}

#[test]
fn runs_are_deterministic() {
    for args in [
        vec!["--format", "json", "verify", "--count", "40"],
        vec!["--format", "json", "verify", "--count", "0", "--oracle-pairs", "5"],
        vec!["--format", "json", "--seed", "7", "pencil", "--scene"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        if args.last().is_some_and(|a| a == "--scene") {
            args.push(scene_arg("genzmer-polynomial.json"));
        }
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (dicrit(&args), dicrit(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_only_the_recorded_seed() {
    let s = scene_arg("genzmer-polynomial.json");
    let a = json(&dicrit(&["--format", "json", "--seed", "3", "pencil", "--scene", &s]));
    let b = json(&dicrit(&["--format", "json", "--seed", "11", "pencil", "--scene", &s]));
    for n in ["mu(f,g)", "mu(fg)", "i0", "mu(h1)", "mu_generic", "S_B"] {
        assert_eq!(entry(&a, n), entry(&b, n), "{n}");
    }
}

#[test]
fn empty_verify_passes() {
    let out = dicrit(&["verify", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn injected_fault_is_caught_with_a_small_counterexample() {
    let out = dicrit(&["--format", "json", "verify", "--count", "20", "--inject-fault", "flip-intersection-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let check = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "A = -F^T F").unwrap();
    assert_eq!(check["holds"], false);
    let cx = r["counterexamples"].as_array().unwrap();
    assert!(!cx.is_empty());
    assert_eq!(cx[0]["blowups"].as_array().unwrap().len(), 1, "minimized counterexample is one blow-up");
    let p = scratch("counterexample.json", &serde_json::to_string(&cx[0]).unwrap());
    assert_eq!(dicrit(&["invariants", "--scene", p.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn text_report_lists_results() {
    let out = dicrit(&["invariants", "--scene", &scene_arg("cusp.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mu(h)") && text.contains("result: PASS"));
}
