//! End-to-end tests of the command-line binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levelgraph-lab"))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_accepts_fixtures() {
    for f in ["fig71.json", "triangle_n3.json"] {
        let out = run(&["validate", &fixture(f)]);
        let v = stdout_json(&out);
        assert_eq!(v["valid"], serde_json::json!(true));
    }
}

#[test]
fn validate_rejects_corrupted_graph() {
    let text = std::fs::read_to_string(fixture("fig71.json")).unwrap();
    let corrupted = text.replace("\"kappa\": 1", "\"kappa\": 2");
    let dir = std::env::temp_dir().join("levelgraph-lab-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corrupted.json");
    std::fs::write(&path, corrupted).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], serde_json::json!(false));
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_json_is_a_structured_error() {
    let dir = std::env::temp_dir().join("levelgraph-lab-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"vertices\": [").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "stderr: {err}");
}

#[test]
fn prongs_on_triangle() {
    let out = run(&["prongs", &fixture("triangle_n3.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["pm_classes"], serde_json::json!("1"));
    assert_eq!(v["K"], serde_json::json!(["3"]));
    assert_eq!(v["brute_force_checked"], serde_json::json!(true));
}

#[test]
fn twist_on_triangle() {
    let out = run(&["twist", &fixture("triangle_n3.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["K"], serde_json::json!(["3"]));
    assert_eq!(v["stw_basis"], serde_json::json!([["3", "0"], ["0", "3"]]));
    assert_eq!(v["a"]["-1"], serde_json::json!(3));
}

#[test]
fn monoid_reports_inertia() {
    let out = run(&["monoid", &fixture("triangle_n3.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["relative_inertia"], serde_json::json!(["3"]));
}

#[test]
fn nguyen_ideal_of_fig71() {
    let out = run(&["ideal", "--scheme", "nguyen", &fixture("fig71.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["vars"], serde_json::json!(["e1", "e2", "e3"]));
    assert_eq!(
        v["generators"],
        serde_json::json!([["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]])
    );
}

#[test]
fn fan_output_shape() {
    let out = run(&["fan", "--method", "hyperplane", &fixture("fig71.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["dim"], serde_json::json!(3));
    assert_eq!(v["cones"].as_array().unwrap().len(), 6);
    assert!(v["cones"][0]["rays"].is_array());
    assert!(v["lattice"].is_array());
}

#[test]
fn newton_and_hyperplane_agree_on_fig71() {
    let a = stdout_json(&run(&["fan", "--method", "newton", &fixture("fig71.json")]));
    let b = stdout_json(&run(&["fan", "--method", "hyperplane", &fixture("fig71.json")]));
    // same cones up to order; compare sorted ray sets
    let rays = |v: &serde_json::Value| {
        let mut r: Vec<String> = v["cones"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["rays"].to_string())
            .collect();
        r.sort();
        r
    };
    assert_eq!(rays(&a), rays(&b));
}

#[test]
fn enumerate_n4() {
    let out = run(&["enumerate", "--n", "4", "--mu", "-1,-1,-1,1"]);
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.is_empty())
        .collect();
    assert_eq!(lines.len(), 4);
    for l in lines {
        let g: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(g["vertices"].is_array());
    }
}

#[test]
fn check_gluing_small_corpus_passes() {
    let out = run(&["check-gluing", "--mu", "-1,-1,-1,1", "--max-edges", "3"]);
    assert!(out.status.success());
    for line in String::from_utf8_lossy(&out.stdout).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], serde_json::json!(true));
    }
}

#[test]
fn fan_check_table_output() {
    let out = run(&[
        "fan-check",
        "--lemma",
        "equality",
        "--mu",
        "-1,-1,-1,1",
        "--max-edges",
        "3",
        "--output",
        "table",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["check-gluing", "--mu", "-1,-1,-1,-1,2", "--max-edges", "3"];
    let one = run(&args);
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sampling_is_seeded_and_deterministic() {
    let args = [
        "check-gluing", "--mu", "-1,-1,-1,-1,2", "--max-edges", "3", "--sample", "2",
        "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}

#[test]
fn slopes_of_flat_tree() {
    let dir = std::env::temp_dir().join("levelgraph-lab-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flat.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "vertices": [
                {"id": 0, "genus": 0, "level": 0},
                {"id": 1, "genus": 0, "level": 0}
            ],
            "legs": [
                {"vertex": 0, "marking": 1, "order": -1},
                {"vertex": 0, "marking": 2, "order": -1},
                {"vertex": 1, "marking": 3, "order": 1},
                {"vertex": 1, "marking": 4, "order": -1}
            ],
            "edges": [{"id": "e", "upper": 0, "lower": 1, "kappa": 0}]
        })
        .to_string(),
    )
    .unwrap();
    let out = run(&["slopes", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["slopes"]["e"], serde_json::json!(1));
    assert_eq!(v["multidegrees"]["0"], serde_json::json!(1));
}
