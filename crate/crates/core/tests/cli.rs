use std::path::PathBuf;
use std::process::{Command, Output};

use coxeter::harness::{VerificationReport, Verdict};
use coxeter::{fixtures, CoxeterMatrix};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxeter")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn data_files_match_fixtures() {
    for name in fixtures::NAMES {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let m = CoxeterMatrix::parse(&text).unwrap();
        assert_eq!(m, fixtures::by_name(name).unwrap(), "{name}");
    }
}

#[test]
fn check_system_exit_codes() {
    let ok = run(&["check-system", data("dihedral-a1").to_str().unwrap()]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("even: true"));
    assert!(stdout(&ok).contains("order 16"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"generators":["a","b"],"matrix":[[1,3],[4,1]]}"#).unwrap();
    assert_eq!(run(&["check-system", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["check-system", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_csv() {
    let o = run(&["enumerate", data("square").to_str().unwrap(), "--radius", "2"]);
    assert!(stdout(&o).contains("total\t13"));
    let csv = run(&["enumerate", data("example").to_str().unwrap(), "--radius", "1", "--csv"]);
    assert_eq!(stdout(&csv).lines().collect::<Vec<_>>(), ["length,word", "0,e", "1,t", "1,r", "1,s"]);
}

#[test]
fn nerve_euler_and_homology() {
    let n = stdout(&run(&["nerve", data("sixteen-cell").to_str().unwrap()]));
    assert!(n.contains("f-vector: [8, 24, 32, 16]") && n.contains("sphere: S^3"), "{n}");
    let e = stdout(&run(&["euler", data("square4").to_str().unwrap()]));
    assert!(e.contains("chi_orb: -1/2"), "{e}");
    let h = stdout(&run(&["homology", data("square").to_str().unwrap(), "--space", "nerve"]));
    assert!(h.contains("betti: [1, 1]"), "{h}");
    let s = stdout(&run(&["homology", data("dihedral-product").to_str().unwrap(), "--space", "sigma", "--radius", "8"]));
    assert!(s.contains("betti: [1, 0, 0, 0, 0]") && s.contains("vanishes: true"), "{s}");
}

#[test]
fn build_ruin_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ruin.json");
    let o = run(&[
        "build-ruin",
        data("example").to_str().unwrap(),
        "--letter",
        "t",
        "--radius",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["T"], "{t}");
    assert!(v["boundary_components"].as_u64().unwrap() > 1);
}

#[test]
fn color_dot_output() {
    let o = run(&["color", data("square").to_str().unwrap(), "--letter", "a", "--radius", "4", "--dot"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("graph ruin {"));
    let bad = run(&["color", data("triangle4").to_str().unwrap(), "--letter", "a", "--radius", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_lemmas_json_schema_and_replay() {
    let o = run(&["verify-lemmas", data("example").to_str().unwrap(), "--radius", "6", "--json"]);
    assert!(o.status.success());
    let raw: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = raw.as_array().unwrap()[0].as_object().unwrap();
    for key in ["check_id", "system", "radius", "letters", "verdict", "witness", "detail", "gated", "elapsed_ms"] {
        assert!(first.contains_key(key), "{key}");
    }

    // an ungated run on a non-flag system fails and replays
    let tri = data("triangle4");
    let o = run(&["verify-lemmas", tri.to_str().unwrap(), "--radius", "4", "--only", "L5.1", "--json", "--no-gate"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(reports[0].verdict, Verdict::Fail);
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("report.json");
    std::fs::write(&saved, &o.stdout).unwrap();
    let r = run(&["verify-lemmas", tri.to_str().unwrap(), "--replay", saved.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("L5.1\tradius 4\treproduced"));

    // gated, the same check is skipped
    let g = run(&["verify-lemmas", tri.to_str().unwrap(), "--radius", "4", "--only", "L5.1"]);
    assert!(g.status.success());
    assert!(stdout(&g).contains("skipped"));
}

#[test]
fn unknown_check_id_is_an_error() {
    let o = run(&["verify-lemmas", data("square").to_str().unwrap(), "--only", "X1"]);
    assert_eq!(o.status.code(), Some(2));
}
