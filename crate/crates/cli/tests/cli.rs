use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphtop")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (serde_json::from_slice(&out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn torus_invariants() {
    let (v, code) = json(&["invariants", "fixture:torus16"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["euler"], 0);
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["cup"]["lower"], 3);
    assert_eq!(v["crit"]["kind"], "exact");
    assert_eq!(v["crit"]["value"], 3);
    assert_eq!((v["cat"]["lower"].as_u64(), v["cat"]["upper"].as_u64()), (Some(3), Some(3)));
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn figure8_invariants() {
    let (v, _) = json(&["invariants", "fixture:figure8"]);
    assert_eq!(v["euler"], -1);
    assert_eq!(v["crit"]["value"], 3);
    assert_eq!((v["cat"]["lower"].as_u64(), v["cat"]["upper"].as_u64()), (Some(2), Some(2)));
    // A homotopic theta graph has only two critical points.
    assert_eq!(v["cri"]["upper"], 2);
}

#[test]
fn reports_are_byte_stable() {
    let a = run(&["--json", "--seed", "5", "invariants", "fixture:octahedron"]);
    let b = run(&["--json", "--seed", "5", "invariants", "fixture:octahedron"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["--json", "--seed", "5", "curvature", "fixture:cycle_6", "--method", "mc:500"]);
    let b = run(&["--json", "--seed", "5", "--threads", "1", "curvature", "fixture:cycle_6", "--method", "mc:500"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let (v, code) = json(&["contractible", "fixture:dunce_hat"]);
    assert_eq!(code, 1);
    assert_eq!(v["contractible"], false);
    assert_eq!(v["refutation"]["removable_vertices"], serde_json::json!([]));
    assert_eq!(json(&["contractible", "fixture:wheel_5"]).1, 0);
    let (v, code) = json(&["crit", "fixture:complete_30"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "over-limit");
    let (v, code) = json(&["crit", "--heuristic", "fixture:complete_30"]);
    assert_eq!((code, v["kind"].as_str(), v["value"].as_u64()), (0, Some("upper-bound"), Some(1)));
    assert_eq!(json(&["invariants", "fixture:nope"]).1, 3);
    assert_eq!(json(&["invariants", "/no/such/file.g6"]).1, 3);
    assert_eq!(json(&["homotopic", "fixture:cycle_4", "fixture:octahedron"]).1, 1);
    let (v, code) = json(&["homotopic", "fixture:cycle_4", "fixture:cycle_7"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("equivalent")));
    assert_eq!(json(&["cover-verify", "fixture:torus16", "--cover", "named:reference"]).1, 1);
    assert_eq!(json(&["cover-verify", "fixture:torus16", "--cover", "named:three_disks"]).1, 0);
}

#[test]
fn orderings() {
    let (v, code) = json(&["morse-check", "fixture:torus16", "--ordering", "named:morse"]);
    assert_eq!(code, 0);
    assert_eq!(v["counts"], serde_json::json!([1, 2, 1]));
    let (v, code) = json(&["ph-check", "fixture:icosahedron", "--ordering", "random:3"]);
    assert_eq!((code, v["holds"].as_bool()), (0, Some(true)));
    assert_eq!(v["index_sum"], 2);
}

#[test]
fn certificate_round_trip() {
    let (v, code) = json(&["homotopic", "fixture:cycle_4", "fixture:cycle_5"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("graphtop-cert-{}.json", std::process::id()));
    std::fs::write(&path, v["certificate"].to_string()).unwrap();
    let (out, code) = json(&["certificate-verify", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!((code, out["valid"].as_bool()), (0, Some(true)));
}

#[test]
fn stdin_and_census() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_graphtop"))
        .args(["--json", "cup", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1 2\n2 3\n3 4\n4 1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 1]));

    let (v, code) = json(&["census", "--order", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["graphs"], 21);
    assert_eq!(v["types_lower"], v["types_upper"]);
    assert!(v["records"][0]["graph6"].is_string());
}

#[test]
fn fixtures_emit_round_trips() {
    let out = run(&["fixtures", "emit", "torus16", "--format", "graph6"]);
    let g6 = String::from_utf8(out.stdout).unwrap();
    let path = std::env::temp_dir().join(format!("graphtop-{}.g6", std::process::id()));
    std::fs::write(&path, g6).unwrap();
    let (v, _) = json(&["invariants", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v["fvector"], serde_json::json!([16, 48, 32]));
    let names = String::from_utf8(run(&["fixtures", "list"]).stdout).unwrap();
    assert!(names.lines().any(|l| l == "dunce_hat"));
}
