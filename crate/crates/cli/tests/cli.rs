use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../curves")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn curvelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_circle_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    let out = curvelab(&[
        "analyze",
        &fixture("circle.json"),
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("sigma 0"));
    let v = json(&report);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "trig");
    assert_eq!(
        v["inventory"]["features"]["bitangents"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn analyze_limacon() {
    let out = curvelab(&["analyze", &fixture("limacon.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("nodes 1") && text.contains("sigma 1"),
        "{text}"
    );
}

#[test]
fn verify_trott_algebraic() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("trott.json");
    let out = curvelab(&[
        "verify",
        &fixture("trott.json"),
        "--theorem",
        "algebraic",
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&report);
    assert_eq!(v["theorem"], "algebraic");
    assert_eq!(v["lhs"], 4.0);
    assert_eq!(v["delta"], 0.0);
    assert_eq!(v["passed"], true);
    assert_eq!(
        v["inventory"]["algebraic"]["bitangents"]
            .as_array()
            .unwrap()
            .len(),
        28
    );
}

#[test]
fn verify_defaults_by_file_kind() {
    for (file, theorem) in [
        ("cubic_a3.json", "Algebraic"),
        ("nodal_cubic.json", "Nodal"),
        ("hyperbola.json", "Projective"),
    ] {
        let out = curvelab(&["verify", &fixture(file)]);
        assert_eq!(code(&out), 0, "{file}: {}", stdout(&out));
        assert!(
            stdout(&out).starts_with(theorem),
            "{file}: {}",
            stdout(&out)
        );
    }
}

#[test]
fn pencil_with_explicit_lines() {
    let out = curvelab(&[
        "verify",
        &fixture("hyperbola.json"),
        "--theorem",
        "lemma31",
        "--line",
        "0.2,1,-0.3",
        "--line",
        "1,0,0.5",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn near_tangent_is_a_genericity_rejection() {
    let out = curvelab(&[
        "verify",
        &fixture("near_tangent.json"),
        "--theorem",
        "projective",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr)
        .to_lowercase()
        .contains("transvers"));
}

#[test]
fn affine_theorem_on_a_crossing_curve_is_rejected() {
    let out = curvelab(&["verify", &fixture("hyperbola.json"), "--theorem", "affine"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn impossible_node_count_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("nodal_cubic.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["nodal"]["N"] = 5.into();
    std::fs::write(&path, v.to_string()).unwrap();
    let out = curvelab(&["verify", path.to_str().unwrap(), "--theorem", "nodal"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn schema_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"schema_version": 1, "kind": "algebraic", "degree": 2, "monomials": [{"i": 1, "j": 0, "k": 0, "c": 1}]}"#)
        .unwrap();
    assert_eq!(code(&curvelab(&["analyze", path.to_str().unwrap()])), 3);
    assert_eq!(code(&curvelab(&["analyze", "/nonexistent/curve.json"])), 3);
    assert_eq!(
        code(&curvelab(&["verify", "--suite", "2", "--theorem", "nodal"])),
        3
    );
    assert_eq!(
        code(&curvelab(&[
            "analyze",
            &fixture("circle.json"),
            "--tol",
            "bogus=1"
        ])),
        3
    );
    assert_ne!(code(&curvelab(&["frobnicate"])), 0);
}

#[test]
fn render_two_circles() {
    let out = curvelab(&["render", &fixture("two_circles.json")]);
    assert_eq!(code(&out), 0);
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"bitangent plus\"").count(), 2);
    assert_eq!(svg.matches("class=\"bitangent minus\"").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray=\"8 5\"").count(), 2);
}

#[test]
fn render_circle_and_hyperbola() {
    let svg = stdout(&curvelab(&["render", &fixture("circle.json")]));
    assert!(svg.contains("class=\"curve\""));
    for mark in ["bitangent", "class=\"flex\"", "class=\"node\"", "asymptote"] {
        assert!(!svg.contains(mark), "unexpected {mark}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.svg");
    let out = curvelab(&[
        "render",
        &fixture("hyperbola.json"),
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("class=\"asymptote\"").count(), 2);
    assert_eq!(svg.matches("|C∩T|=1").count(), 2);
}

#[test]
fn render_is_deterministic() {
    let a = curvelab(&["render", &fixture("wave_ellipse.json")]);
    let b = curvelab(&["render", &fixture("wave_ellipse.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_on_limacon() {
    let out = curvelab(&["oracle", &fixture("limacon.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Node"));
}

#[test]
fn small_suites() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let out = curvelab(&[
        "verify",
        "--suite",
        "4",
        "--theorem",
        "affine",
        "--seed",
        "9",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&path);
    assert_eq!(v["count"], 4);
    assert_eq!(v["passed"], 4);
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.iter().enumerate().all(|(k, e)| e["index"] == k));
    let out = curvelab(&[
        "verify",
        "--suite",
        "3",
        "--theorem",
        "algebraic",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn tolerance_flags_and_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(["analyze", &fixture("circle.json"), "--resolution", "512"])
        .env("CURVELAB_TOL_PT", "1e-8")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let out = Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(["analyze", &fixture("circle.json")])
        .env("CURVELAB_TOL_PT", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}
