use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn repcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn exported() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("catalog");
    let out = repcert(&["catalog", "export", "--dir", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    (dir, path)
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn digits_of_machines_and_streams() {
    let (_tmp, cat) = exported();
    let out = repcert(&["digits", "--machine", &file(&cat, "xi2.json"), "--count", "40"]);
    assert_eq!(stdout(&out), "1110111001101000011111101110100000010110\n");
    let out = repcert(&["digits", "--stream", "surd:2", "--base", "10", "--count", "39"]);
    assert_eq!(stdout(&out), "414213562373095048801688724209698078569\n");
    let out = repcert(&["digits", "--machine", "catalog:xi0", "--count", "8"]);
    assert_eq!(stdout(&out), "11111110\n");
}

#[test]
fn invalid_machine_file_exits_2() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "dfao", "k": 2}"#).unwrap();
    let out = repcert(&["digits", "--machine", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    let out = repcert(&["digits", "--machine", tmp.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn pushdown_certificate_verifies_in_a_fresh_process() {
    let (tmp, cat) = exported();
    let machine = file(&cat, "xi2.json");
    let cert = file(tmp.path(), "xi2.cert.json");
    let out = repcert(&[
        "certify", "--machine", &machine, "--budget", "1000", "--depth", "12", "--output", &cert,
    ]);
    assert_eq!(code(&out), 0);
    let summary = stdout(&out);
    assert!(summary.contains("pair (1,5)"), "{summary}");
    assert!(summary.contains("bound 5/4"), "{summary}");
    assert!(summary.contains("rational or transcendental"));
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"dioLowerBound\": \"5/4\""));

    let out = repcert(&["verify", "--machine", &machine, "--certificate", &cert, "--extra-depth", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = repcert(&["verify", "--machine", &file(&cat, "tm.json"), "--certificate", &cert]);
    assert_eq!(code(&out), 2);
}

#[test]
fn every_certificate_kind_round_trips_through_verify() {
    let (tmp, cat) = exported();
    let cases: Vec<Vec<String>> = vec![
        vec!["--machine".into(), file(&cat, "tm.json")],
        vec!["--machine".into(), file(&cat, "three-squares.json")],
        vec!["--machine".into(), file(&cat, "xi1.json")],
        vec!["--machine".into(), file(&cat, "tm-morphic.json")],
        vec!["--stream".into(), "xi3".into(), "--pair".into(), "10,20".into(), "--k".into(), "2".into()],
    ];
    for (i, source) in cases.iter().enumerate() {
        let cert = file(tmp.path(), &format!("{i}.json"));
        let mut args: Vec<&str> = vec!["certify"];
        args.extend(source.iter().map(String::as_str));
        args.extend(["--depth", "8", "--output", &cert]);
        let out = repcert(&args);
        assert_eq!(code(&out), 0, "{source:?}: {}", String::from_utf8_lossy(&out.stderr));

        let mut args: Vec<&str> = vec!["verify"];
        args.extend(source.iter().take(2).map(String::as_str));
        args.extend(["--certificate", &cert]);
        let out = repcert(&args);
        assert_eq!(code(&out), 0, "{source:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn certify_exit_codes() {
    let (_tmp, cat) = exported();
    let out = repcert(&["certify", "--machine", &file(&cat, "squares.json")]);
    assert_eq!(code(&out), 2);
    let out = repcert(&["certify", "--machine", &file(&cat, "xi2.json"), "--budget", "4"]);
    assert_eq!(code(&out), 1);
    let out = repcert(&["certify", "--machine", &file(&cat, "tm.json"), "--pair", "1,3", "--depth", "4"]);
    assert_eq!(code(&out), 2);
    let out = repcert(&["certify", "--pair", "10,20", "--k", "2", "--stream", "xi3", "--depth", "12"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"dioLowerBound\": \"20/19\""));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound 20/19"));
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn exact(v: &serde_json::Value) -> (u64, u64) {
    let (p, q) = v["exact"].as_str().unwrap().split_once('/').unwrap();
    (p.parse().unwrap(), q.parse().unwrap())
}

#[test]
fn analyze_tables() {
    let (_tmp, cat) = exported();
    let xi1 = file(&cat, "xi1.json");
    let out = repcert(&["--format", "json", "analyze", "--machine", &xi1, "--complexity", "1..16"]);
    let report = json(&out);
    let table: Vec<u64> = report["complexity"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!(table, [3, 7, 11, 16, 21, 27, 34, 42, 50, 59, 69, 80, 92, 105, 119, 134]);

    let out = repcert(&["--format", "json", "analyze", "--machine", &file(&cat, "tm.json"), "--dio", "2^4..2^14"]);
    let rows = json(&out)["dio"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let (p, q) = exact(&row["ratio"]);
        assert!(p <= 3 * q);
    }

    let out = repcert(&["--format", "json", "analyze", "--machine", &xi1, "--dilation", "10^4"]);
    let (p, q) = exact(&json(&out)["dilation"]["minRatio"]);
    assert!(p >= 2 * q);
}

#[test]
fn analyze_needs_enough_data() {
    let tmp = TempDir::new().unwrap();
    let digits = tmp.path().join("digits.txt");
    std::fs::write(&digits, "0110100110\n").unwrap();
    let stream = format!("file:{}", digits.display());
    let out = repcert(&["analyze", "--stream", &stream, "--complexity", "1..4"]);
    assert_eq!(code(&out), 3);
    let out = repcert(&["analyze", "--stream", &stream, "--complexity", "1..4", "--prefix", "10"]);
    assert_eq!(code(&out), 0);
    let out = repcert(&["analyze", "--stream", &stream, "--dio", "1..20"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn conversion_round_trip() {
    let (tmp, cat) = exported();
    let out = repcert(&["convert", "--machine", &file(&cat, "tm-morphic.json")]);
    assert_eq!(stdout(&out), std::fs::read_to_string(cat.join("tm.json")).unwrap());
    let back = file(tmp.path(), "back.json");
    let out = repcert(&["convert", "--machine", &file(&cat, "tm.json"), "--output", &back]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(&back).unwrap(),
        std::fs::read_to_string(cat.join("tm-morphic.json")).unwrap()
    );
    let out = repcert(&["convert", "--machine", &file(&cat, "xi1.json")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn imitation_reports() {
    let out = repcert(&["imitate", "--stream", "surd:2", "--base", "2", "--states", "1", "--len", "100"]);
    assert!(stdout(&out).starts_with("I=1\n"));
    let out = repcert(&["imitate", "--stream", "rational:1/3", "--base", "2", "--states", "2", "--len", "64"]);
    assert!(stdout(&out).starts_with("I=64 censored\n"));
    let out = repcert(&["imitate", "--states", "6"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("candidate machines"));
}

#[test]
fn equivalence_and_continued_fractions() {
    let out = repcert(&["equiv", "--machine", "catalog:xi2"]);
    assert!(stdout(&out).starts_with("pair (1,5) by exact equivalence"));
    let out = repcert(&["equiv", "--machine", "catalog:xi2", "--pair", "1,2"]);
    assert!(stdout(&out).contains("distinguished"));
    let out = repcert(&["cf", "--d", "7", "--count", "3"]);
    assert_eq!(stdout(&out), "sqrt(7) = [2; (1, 1, 1, 4)]\n   0 2/1\n   1 3/1\n   2 5/2\n");
    let out = repcert(&["cf", "--d", "16"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let (tmp, cat) = exported();
    let runs: Vec<Vec<String>> = vec![
        vec!["digits".into(), "--machine".into(), file(&cat, "xi2.json"), "--count".into(), "500".into()],
        vec!["analyze".into(), "--machine".into(), file(&cat, "xi1.json"), "--complexity".into(), "1..32".into(), "--dio".into(), "1..200".into(), "--growth".into()],
        vec!["certify".into(), "--machine".into(), file(&cat, "xi2.json"), "--depth".into(), "6".into()],
        vec!["certify".into(), "--machine".into(), file(&cat, "xi1.json"), "--depth".into(), "6".into()],
        vec!["dilation".into(), "--machine".into(), file(&cat, "squares.json")],
        vec!["--format".into(), "json".into(), "growth".into(), "--machine".into(), file(&cat, "fibonacci.json")],
        vec!["imitate".into(), "--states".into(), "2".into()],
        vec!["catalog".into(), "export".into(), "--dir".into(), file(tmp.path(), "again")],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = repcert(&args);
        let second = repcert(&args);
        assert_eq!(code(&first), 0, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.stderr, second.stderr, "{args:?}");
    }
    for entry in std::fs::read_dir(&cat).unwrap() {
        let path = entry.unwrap().path();
        let again = tmp.path().join("again").join(path.file_name().unwrap());
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(again).unwrap());
    }
}
