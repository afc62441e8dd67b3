use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetopo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn catalog_listing() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["sym:4, order 24, solvable", "psl2:7, order 168, simple", "sym:3, order 6, in F'"] {
        assert!(text.lines().any(|l| l.starts_with(line)), "missing {line}");
    }
    assert_eq!(run(&["catalog"]).stdout, text.as_bytes());
}

#[test]
fn compute_examples() {
    let out = run(&["compute", "--group", "alt:5", "--homology", "coset", "--no-cache"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["homology"]["coset"]["betti"][2], 1560);

    let out = run(&["compute", "--group", "sym:3", "--predict", "all", "--verify", "--no-cache"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["predictions"]["coset"]["count"], 8);
    assert_eq!(r["predictions"]["coset"]["dimension"], 1);
    assert!(r["verification"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let out = run(&["compute", "--group", "psl2:7", "--zeta", "--no-cache"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["zeta"]["p_minus_one"], -2856);
}

#[test]
fn warm_and_cold_cache_reports_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["compute", "--group", "alt:4", "--homology", "all", "--bounds", "--classify", "--cache-dir", cache];
    let cold = run(&args);
    let warm = run(&args);
    let none = run(&["compute", "--group", "alt:4", "--homology", "all", "--bounds", "--classify", "--no-cache"]);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, none.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 2);
    let mut spot = args.to_vec();
    spot.push("--spot-check");
    assert!(run(&spot).status.success());
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["compute", "--group", "sym:3", "--homology", "coset", "--cache-dir", cache];
    let first = run(&args);
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "garbage").unwrap();
    }
    let second = run(&args);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn several_groups_keep_input_order() {
    let out = run(&["compute", "--group", "sym:4", "--group", "cyclic:6", "--zeta", "--jobs", "2", "--no-cache"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    let specs: Vec<&str> =
        r["reports"].as_array().unwrap().iter().map(|x| x["group"]["spec"].as_str().unwrap()).collect();
    assert_eq!(specs, ["sym:4", "cyclic:6"]);
}

#[test]
fn csv_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("betti.csv");
    let report = dir.path().join("report.json");
    let out = run(&[
        "compute",
        "--group",
        "alt:4",
        "--homology",
        "all",
        "--no-cache",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("group,poset,dimension,rank,torsion\n"));
    assert!(text.contains("alt:4,coset,1,30,"));
    assert!(text.contains("alt:4,subgroup,0,4,"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["group"]["order"], 12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["compute", "--group", "bogus:3"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--grp", "sym:3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--group", "alt:5", "--cap", "10"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("pi1.json");
    let out = run(&["verify", "pi1", "--no-cache", "--out", summary.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS pi1:")).count(), 3);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["pass"], true);
    assert_eq!(run(&["verify", "--suite", "covers", "--no-cache"]).status.code(), Some(0));
}
