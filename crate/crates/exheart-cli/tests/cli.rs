use std::path::PathBuf;
use std::process::Command;

use exheart::linalg::FieldSpec;
use exheart_cli::golden::{run_text, EXAMPLES};
use exheart_cli::run::{exit_code, render_json, render_text, Options, Status};
use exheart_cli::workspace::{canonical, parse};

const MINIMAL: &str = "[quiver]\nvertices v\n\n[modules]\nM = simple v\n";

const A2_HEAD: &str = "[field]\nq\n[quiver]\nvertices 1 2\narrow a 2 -> 1\n[modules]\nP1 = projective 1\nP2 = projective 2\n";

fn example(name: &str) -> &'static str {
    EXAMPLES.iter().find(|(n, _)| *n == name).unwrap().1
}

#[test]
fn minimal_workspace_has_one_module() {
    let ws = parse(MINIMAL, None).unwrap();
    assert_eq!(ws.modules.len(), 1);
    assert_eq!(ws.field, FieldSpec::Rationals);
    assert_eq!(ws.module("M").unwrap().dims, vec![1]);
}

#[test]
fn a2_example_inputs() {
    let ws = parse(example("a2_example"), None).unwrap();
    assert_eq!(ws.vertices, ["1", "2"]);
    assert_eq!(ws.arrows, [("a".to_string(), "2".to_string(), "1".to_string())]);
    let e = ws.subcat("E_sub").unwrap();
    let dims: Vec<Vec<usize>> = e.generators.iter().map(|g| g.dims.clone()).collect();
    assert_eq!(dims, [vec![1, 1], vec![0, 1]]);
    assert_eq!(ws.module("P1").unwrap().dims, [1, 0]);
}

#[test]
fn non_intertwining_map_names_the_arrow() {
    let text = format!("{A2_HEAD}[maps]\nbad : P2 -> P1 = comps 1=[[1]]\n");
    let d = parse(&text, None).unwrap_err();
    assert_eq!(d.line, 10);
    assert!(d.msg.contains("arrow `a`"), "{d}");
}

#[test]
fn diagnostics_carry_locations() {
    let d = parse("[quiver]\nvertices 1\n[modules]\nM = simple 7\n", None).unwrap_err();
    assert_eq!((d.line, d.col), (4, 12));
    let d = parse("[modules]\nM = frobnicate\n[oops]\n", None).unwrap_err();
    assert_eq!(d.line, 3);
    let d = parse(&format!("{A2_HEAD}[modules]\nP1 = simple 1\n"), None).unwrap_err();
    assert!(d.msg.contains("P1"), "{d}");
    let d = parse(&format!("{A2_HEAD}[subcategories]\nE = add P1 Q\n"), None).unwrap_err();
    assert!(d.msg.contains("Q"), "{d}");
}

#[test]
fn canonical_form_round_trips() {
    for (name, text) in EXAMPLES {
        let ws = parse(text, None).unwrap();
        let once = canonical(&ws);
        let again = canonical(&parse(&once, None).unwrap_or_else(|d| panic!("{name}: {d}\n{once}")));
        assert_eq!(once, again, "{name}");
    }
}

#[test]
fn field_override_wins() {
    let ws = parse(example("a2_example"), Some(FieldSpec::Prime(5))).unwrap();
    assert_eq!(ws.field, FieldSpec::Prime(5));
    assert!(canonical(&ws).starts_with("[field]\nfp:5\n"));
}

#[test]
fn expect_mismatch_fails() {
    let text = example("dual_numbers").replace("expect VerifiedUpToBound(2)", "expect VerifiedUpToBound(3)");
    let reports = run_text(&text, Options::default()).unwrap();
    let r = reports.iter().find(|r| r.query.starts_with("maxneg")).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert_eq!(exit_code(&reports), 1);
}

#[test]
fn unknown_names_are_query_errors() {
    let reports = run_text(&format!("{MINIMAL}[queries]\nclassify nope\n"), Options::default()).unwrap();
    assert_eq!(reports[0].status, Status::Fail);
    assert!(reports[0].headline.starts_with("error"));
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Set `EXHEART_BLESS=1` to rewrite the golden files.
fn compare_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("EXHEART_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(expected, actual, "golden mismatch for {name}");
}

#[test]
fn golden_reports() {
    for (name, text) in EXAMPLES {
        let reports = run_text(text, Options::default()).unwrap();
        assert!(reports.iter().all(|r| r.status != Status::Fail), "{name}: {}", render_text(&reports));
        compare_golden(&format!("{name}.txt"), &render_text(&reports));
        compare_golden(&format!("{name}.json"), &render_json(&reports));
    }
}

#[test]
fn json_keys_are_sorted() {
    let reports = run_text(example("a2_example"), Options::default()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&render_json(&reports)).unwrap();
    fn sorted(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Object(m) => m.keys().zip(m.keys().skip(1)).all(|(a, b)| a < b) && m.values().all(sorted),
            serde_json::Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    assert!(sorted(&doc));
    for r in doc["reports"].as_array().unwrap() {
        for key in ["data", "headline", "query", "status"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert!(["pass", "unknown", "fail"].contains(&r["status"].as_str().unwrap()));
    }
}

fn exheart(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_exheart")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn workspace_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("workspaces").join(format!("{name}.exh")).to_string_lossy().into_owned()
}

#[test]
fn binary_is_byte_deterministic() {
    let a2 = workspace_file("a2_example");
    let first = exheart(&["--format", "json", "run", &a2]);
    let second = exheart(&["--format", "json", "run", &a2]);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
}

#[test]
fn subcommands_and_exit_codes() {
    let a2 = workspace_file("a2_example");
    let dual = workspace_file("dual_numbers");
    let (code, out) = exheart(&["heart", &a2, "compute", "E_sub", "LHb"]);
    assert_eq!(code, 0);
    assert!(out.contains("[pass] P2, I2, shift(P1,1)\n"), "{out}");
    let (code, out) = exheart(&["maxneg", &dual, "E_split"]);
    assert_eq!(code, 0);
    assert!(out.contains("[pass] VerifiedUpToBound(2)\n"), "{out}");
    let (code, _) = exheart(&["heart", &dual, "compute", "E_split", "LHb"]);
    assert_eq!(code, 2);
    let (code, _) = exheart(&["classify", &a2, "nope"]);
    assert_eq!(code, 1);
    let (code, out) = exheart(&["--bound", "1", "maxneg", &dual, "E_split"]);
    assert_eq!(code, 0);
    assert!(out.contains("VerifiedUpToBound(1)"));
    let (code, out) = exheart(&["--window", "-1:1", "heart", &a2, "compute", "E_sub", "RHb"]);
    assert_eq!(code, 0);
    assert!(out.contains("P1, P2, I2"), "{out}");
}
