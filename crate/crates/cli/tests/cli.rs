use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contraction"))
}

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args).env_remove("CONTRACTION_CACHE_DIR");
    if let Some(dir) = cache {
        c.env("CONTRACTION_CACHE_DIR", dir);
    }
    c.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn constant(rep: &Value, i: usize, key: &str) -> Value {
    rep["results"][i]["constants"][key].clone()
}

#[test]
fn gen_writes_space_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["gen", "--family", "grid", "--size", "8", "--out", out], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("grid-8.space")).unwrap();
    assert!(text.starts_with("space v1 grid"));
    let o = run(&["gen", "--family", "zfp", "--radius", "3", "--out", out], None);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("zfp-3.space").is_file());
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&run(&["gen", "--family", "nope", "--size", "3"], None)), 2);
    assert_eq!(code(&run(&["hat", "--space", "grid:x"], None)), 2);
    assert_eq!(code(&run(&["hat", "--space", "grid:4", "--gauge", "affine:2:1"], None)), 2);
    assert_eq!(code(&run(&["audit", "--space", "grid:4", "no-such-audit"], None)), 2);
    // the closest point estimate needs K(r) >= 10r+1
    let o = run(&["audit", "--space", "grid:4", "--gauge", "affine:4:1", "closest-point-17"], None);
    assert_eq!(code(&o), 2);
    // sweep cap
    assert_eq!(code(&run(&["hat", "--space", "grid:20", "--sweep-cap", "100"], None)), 2);
}

#[test]
fn truncated_space_file_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.space");
    std::fs::write(&path, "space v1 grid 3\nmetricgraph v1 4\ne 0 1\ne 1").unwrap();
    let o = run(&["hat", "--space", path.to_str().unwrap()], None);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn passing_audits_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(
        &["audit", "--space", "grid:8", "one-thin-triangles", "closest-point-17", "--out", out],
        None,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = report(dir.path());
    assert_eq!(rep["results"][0]["status"], "pass");
    assert_eq!(rep["results"][1]["status"], "pass");
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn failing_audit_exits_1() {
    // the whole ball includes truncated boundary sheets, where the
    // intra-sheet claim is out of sample and fails
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["cone-compare", "--space", "zfp:4", "--core-depth", "4", "--out", out], None);
    assert_eq!(code(&o), 1);
    assert_eq!(report(dir.path())["results"][0]["status"], "fail");
    let o = run(&["cone-compare", "--space", "zfp:4", "--out", out], None);
    assert_eq!(code(&o), 0);
}

#[test]
fn hat_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["hat", "--space", "tree:3:40", "--out", out], None)), 0);
    let rep = report(dir.path());
    assert_eq!(constant(&rep, 0, "cone_edges"), 0);
    assert_eq!(constant(&rep, 0, "hat_diameter"), constant(&rep, 0, "base_diameter"));
    let hat = std::fs::read_to_string(dir.path().join("hat.txt")).unwrap();
    assert!(hat.starts_with("hatgraph v1 40 thin affine:10:1"));

    let cones = |mode: &str| {
        let d = tempfile::tempdir().unwrap();
        let o = run(&["hat", "--space", "grid:5", "--gauge", "affine:4:1", "--mode", mode, "--out", d.path().to_str().unwrap()], None);
        assert_eq!(code(&o), 0);
        let text = std::fs::read_to_string(d.path().join("hat.txt")).unwrap();
        text.lines()
            .filter(|l| l.starts_with("c "))
            .map(str::to_string)
            .collect::<std::collections::BTreeSet<_>>()
    };
    assert!(cones("thin").is_subset(&cones("quad")));
}

#[test]
fn cache_does_not_change_reports() {
    let cache = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "audit".to_string(),
            "--space".into(),
            "zfp:3".into(),
            "one-thin-triangles".into(),
            "geodesic-image".into(),
            "--out".into(),
            out.into(),
        ]
    };
    let plain = tempfile::tempdir().unwrap();
    let a: Vec<String> = args(plain.path().to_str().unwrap());
    let a: Vec<&str> = a.iter().map(String::as_str).collect();
    assert_eq!(code(&run(&a, None)), 0);
    let want = std::fs::read(plain.path().join("report.json")).unwrap();

    for round in 0..3 {
        if round == 2 {
            // damage every cached file; results must not change
            for e in std::fs::read_dir(cache.path()).unwrap() {
                let p = e.unwrap().path();
                let mut bytes = std::fs::read(&p).unwrap();
                let mid = bytes.len() / 2;
                bytes[mid] ^= 0x55;
                bytes.truncate(bytes.len() - 1);
                std::fs::write(&p, bytes).unwrap();
            }
        }
        let out = tempfile::tempdir().unwrap();
        let a: Vec<String> = args(out.path().to_str().unwrap());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(code(&run(&a, Some(cache.path()))), 0);
        assert_eq!(std::fs::read(out.path().join("report.json")).unwrap(), want, "round {round}");
    }
    let names: Vec<String> = std::fs::read_dir(cache.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n.ends_with(".csdc")));
    assert!(names.iter().any(|n| n.ends_with(".csrm")));
}

#[test]
fn timing_is_opt_in() {
    let o = run(&["hat", "--space", "grid:4"], None);
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rep["results"][0]["millis"].is_null());
    let o = run(&["hat", "--space", "grid:4", "--timing"], None);
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rep["results"][0]["millis"].is_u64());
}
