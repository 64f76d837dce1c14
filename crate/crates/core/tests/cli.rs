use std::path::PathBuf;
use std::process::{Command, Output};

use lpacket::cli::ParameterFile;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpacket")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &path("coxeter_n4.toml")]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["regular"], true);
    assert_eq!(v["input"]["omega"], "(1 2 -1 -2)");

    let nondiscrete = run(&["validate", &path("identity_n4.toml")]);
    assert_eq!(nondiscrete.status.code(), Some(2));
    let v = json(&nondiscrete);
    assert_eq!(v["discrete"], false);
    assert!(v["diagnostics"][0].as_str().unwrap().contains("discrete"));

    let origin = run(&["validate", &path("origin_n4.toml")]);
    assert_eq!(origin.status.code(), Some(2));
    assert_eq!(json(&origin)["regular"], false);

    let incompatible = run(&["validate", &path("incompatible_q.toml")]);
    assert_eq!(incompatible.status.code(), Some(2));
    assert_eq!(json(&incompatible)["frobenius_compatible"], false);

    let malformed = run(&["validate", &path("malformed_y.toml")]);
    assert_eq!(malformed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("y[0]"));

    let missing = run(&["validate", &path("does_not_exist.toml")]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn packet_json() {
    let out = run(&["packet", &path("coxeter_n4.toml"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], 2);
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
    assert_eq!(v["a_phi"], serde_json::json!(["2"]));
    assert_eq!(v["members"][0]["reduction"]["label"], "Sp4");
    assert_eq!(v["members"][1]["reduction"]["label"], "O4'");

    let v = json(&run(&["packet", &path("coxeter_n5.toml")]));
    assert_eq!(v["size"], 4);
    assert!(v["members"].as_array().unwrap().iter().all(|m| m["constituents"].as_array().unwrap().len() == 2));

    let v = json(&run(&["packet", &path("eta_n4.toml")]));
    assert_eq!(v["size"], 4);
    assert_eq!(v["label_warning"], Value::Null);

    let v = json(&run(&["packet", &path("plane_n3.toml")]));
    assert_eq!(v["character"]["u1_bit"], 1);
    assert!(v["members"].as_array().unwrap().iter().all(|m| m["central_bit"] == 1));

    assert_eq!(run(&["packet", &path("identity_n4.toml")]).status.code(), Some(2));
    assert_eq!(run(&["packet", &path("incompatible_q.toml")]).status.code(), Some(2));
    assert_eq!(run(&["packet", &path("malformed_y.toml")]).status.code(), Some(1));
}

#[test]
fn packet_output_is_deterministic() {
    let a = run(&["packet", &path("eta_n4.toml")]);
    let b = run(&["packet", &path("eta_n4.toml")]);
    assert_eq!(a.stdout, b.stdout);
    let r = run(&["packet", &path("coxeter_n5.toml"), "--report"]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("packet size: 4"), "{text}");
    assert_eq!(run(&["packet", &path("eta_n4.toml"), "--json", "--report"]).status.code(), Some(1));
}

#[test]
fn weyl_listing() {
    let v = json(&run(&["weyl", "2", "--classes"]));
    assert_eq!(v["count"], 5);
    assert_eq!(v["group_order"], "8");
    let v = json(&run(&["weyl", "3", "--elliptic"]));
    assert_eq!(v["count"], 3);
    assert_eq!(run(&["weyl", "0"]).status.code(), Some(2));
    assert_eq!(run(&["weyl", "40"]).status.code(), Some(2));
}

#[test]
fn check_against_fixtures() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"), "{text}");
    assert!(!text.contains("FAIL "));

    let v = json(&run(&["check", "--json", "--min-n", "3", "--max-n", "7"]));
    assert_eq!(v["failed"], 0);

    let empty = run(&["check", "--min-n", "6", "--max-n", "5"]);
    assert_eq!(empty.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let fixtures = dir.path().to_string_lossy().into_owned();
    assert_eq!(run(&["check", "--fixtures", &fixtures]).status.code(), Some(1));
    std::fs::write(dir.path().join("appendix_ramified.txt"), "4 qs four 0 1\n").unwrap();
    assert_eq!(run(&["check", "--fixtures", &fixtures]).status.code(), Some(1));
    let bundled = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    assert_eq!(run(&["check", "--fixtures", &bundled.to_string_lossy()]).status.code(), Some(0));
    // a table missing rows makes the check fail
    let text = std::fs::read_to_string(bundled.join("appendix_ramified.txt")).unwrap();
    let trimmed: String = text.lines().filter(|l| *l != "5 qs 2 3 1").map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.path().join("appendix_ramified.txt"), trimmed).unwrap();
    assert_eq!(run(&["check", "--fixtures", &fixtures]).status.code(), Some(2));
}

#[test]
fn golden_files_round_trip() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let p = entry.unwrap().path();
        let f = ParameterFile::read(&p).unwrap();
        let Ok(param) = f.to_parameter() else { continue };
        let back = ParameterFile::from_parameter(&param, f.q);
        assert_eq!(back.to_parameter().unwrap(), param, "{}", p.display());
        assert_eq!(ParameterFile::from_toml(&back.to_toml()).unwrap(), back);
    }
}
