use std::path::Path;
use std::process::{Command, Output};

fn isoleaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoleaf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_positive() {
    let o = isoleaf(&["classify", "--g1", "1,0", "--g2", "0,1", "--field", "gaussian"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Positive, Vol=1");
    assert!(stderr(&o).contains("normalized (1, i)"));
}

#[test]
fn classify_rational_fraction_input() {
    let o = isoleaf(&["classify", "--g1", "1/2,0", "--g2", "0,-3", "--field", "gaussian"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Negative, Vol=-3/2");
}

#[test]
fn veech_triangular() {
    let o = isoleaf(&["veech", "--g1", "1,0", "--g2", "0,0", "--field", "rational"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "TriangularV");
}

#[test]
fn veech_quadratic() {
    let o = isoleaf(&["veech", "--g1", "1,0", "--g2", "-1,1", "--field", "quadratic", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "QuadraticV");
    assert_eq!(v["generator"]["alpha"], "3");
    assert_eq!(v["generator"]["beta"], "2");
}

#[test]
fn build_check_stats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let o = isoleaf(&["atlas", "build", "--kind", "arithmetic", "--kmax", "10", "--out", path(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("bound 10"));
    let o = isoleaf(&["atlas", "check", path(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = isoleaf(&["atlas", "stats", path(&a)]);
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["leaf"], "arithmetic");
    assert_eq!(s["bound"], 10);

    // load and re-serialize through a second build of the same input
    let b = dir.path().join("b.json");
    isoleaf(&["atlas", "build", "--g1", "1,0", "--g2", "0,0", "--field", "rational", "--bound", "10", "--out", path(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn every_kind_builds_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["positive", "negative", "arithmetic", "nonarith"] {
        let a = dir.path().join(format!("{kind}.json"));
        let o = isoleaf(&["atlas", "build", "--kind", kind, "--bound", "2", "--out", path(&a)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        let o = isoleaf(&["atlas", "check", path(&a)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stdout(&o));
    }
}

#[test]
fn tampered_atlas_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("p.json");
    isoleaf(&["atlas", "build", "--kind", "positive", "--bound", "1", "--out", path(&a)]);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    doc["gluings"][0]["offset"] = serde_json::json!(["2", "1"]);
    std::fs::write(&a, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let o = isoleaf(&["atlas", "check", path(&a)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL gluing involution"), "{out}");
    let line = out.lines().find(|l| l.starts_with("counterexample ")).expect("counterexample line");
    let v: serde_json::Value = serde_json::from_str(line.trim_start_matches("counterexample ")).unwrap();
    let detail = v["detail"].as_str().unwrap();
    assert!(detail.contains("segment 0 TT"), "{detail}");
    assert!(detail.contains("(-1, -1)"), "{detail}");

    let o = isoleaf(&["atlas", "check", "--json", path(&a)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("n.json");
    let svg = dir.path().join("n.svg");
    isoleaf(&["atlas", "build", "--kind", "negative", "--bound", "2", "--out", path(&a)]);
    let o = isoleaf(&["render", "--atlas", path(&a), "--out", path(&svg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>"));
    assert!(s.contains("version=\"1.1\""));
    let again = dir.path().join("n2.svg");
    isoleaf(&["render", "--atlas", path(&a), "--out", path(&again)]);
    assert_eq!(s, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn teich_trace_csv() {
    let o = isoleaf(&["teich", "trace", "--u", "1,0", "--tmax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,re_sigma,im_sigma,distance"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    let s0: f64 = rows[0][2].parse().unwrap();
    assert!((s0 - 1.0).abs() < 1e-8);
    assert!(rows[4][3].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn teich_invert_round_trips() {
    let o = isoleaf(&["teich", "invert", "--z", "0.3,-0.4", "--tau-guess", "0.2,1.1", "--precision", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["tau"][1].as_f64().unwrap() > 0.0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(isoleaf(&["classify", "--g1", "1", "--g2", "0,1", "--field", "gaussian"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["classify", "--g1", "1,0", "--g2", "0,1", "--field", "octonion"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["classify", "--g1", "0,0", "--g2", "0,0", "--field", "gaussian"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["atlas", "build", "--out", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["atlas", "check", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["teich", "invert", "--z", "0,1", "--precision", "-1"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["teich", "trace", "--u", "1,x"]).status.code(), Some(2));
    assert_eq!(isoleaf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_isoleaf"))
            .env("ISOLEAF_THREADS", v)
            .args(["classify", "--g1", "1,0", "--g2", "0,1", "--field", "gaussian"])
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}
