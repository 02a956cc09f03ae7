use std::fs;
use std::process::{Command, Output};

fn kplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kplane"))
        .args(args)
        .env_remove("KPLANE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_writes_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.txt");
    let o = kplane(&["gen", "gk", "--k", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "n=160 m=670");
    assert!(fs::read_to_string(&path).unwrap().lines().count() >= 670);

    let o = kplane(&["gen", "gadget-x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n=9 m=32"));
}

#[test]
fn gen_rejects_bad_parameters() {
    assert_eq!(kplane(&["gen", "gk", "--k", "1"]).status.code(), Some(2));
    assert_eq!(
        kplane(&["gen", "k9-minus", "--remove", "0-x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kplane(&["gen", "nonsense"]).status.code(), Some(2));
}

#[test]
fn enumerate_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k4.txt");
    let o = kplane(&["gen", "complete", "--k", "4", "-o", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("drawings");
    let o = kplane(&[
        "enumerate",
        "--graph",
        g.to_str().unwrap(),
        "--dedup",
        "canonical",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let count: usize = stdout(&o).trim().parse().unwrap();
    let files: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.file_name()
                .unwrap()
                .to_str()
                .unwrap()
                .starts_with("drawing-")
        })
        .collect();
    assert_eq!(files.len(), count);
    assert!(out.join("stats.json").exists());

    let dot = kplane(&["export", "--drawing", files[0].to_str().unwrap()]);
    assert_eq!(dot.status.code(), Some(0));
    assert!(stdout(&dot).starts_with("graph"));
}

#[test]
fn enumerate_is_deterministic_across_threads() {
    let one = kplane(&["enumerate", "--graph", "k5", "--dedup", "labeled-mirror"]);
    let two = kplane(&[
        "--threads",
        "2",
        "enumerate",
        "--graph",
        "k5",
        "--dedup",
        "labeled-mirror",
    ]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&two));
}

#[test]
fn check_exit_codes() {
    assert_eq!(
        kplane(&["check", "--graph", "k5", "--maximal"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        kplane(&["check", "--graph", "c6", "--maximal"])
            .status
            .code(),
        Some(1)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_kplane"))
        .args(["check", "--graph", "k6", "--maximal"])
        .env("KPLANE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        kplane(&["check", "--graph", "missing-file", "--maximal"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_saturated_drawing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k5");
    let o = kplane(&[
        "enumerate",
        "--graph",
        "k5",
        "--limit",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let d = out.join("drawing-0.json");
    let o = kplane(&["check", "--drawing", d.to_str().unwrap(), "--saturated"]);
    assert_eq!(o.status.code(), Some(0));

    let c = dir.path().join("c5");
    kplane(&[
        "enumerate",
        "--graph",
        "c5",
        "--limit",
        "1",
        "--out",
        c.to_str().unwrap(),
    ]);
    let o = kplane(&[
        "check",
        "--drawing",
        c.join("drawing-0.json").to_str().unwrap(),
        "--saturated",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("addable"));
}

#[test]
fn audit_k5_reports_zero_margin() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("audit.json");
    let o = kplane(&[
        "audit",
        "--graph",
        "k5",
        "--all-admissible",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"]["margin"], 0);
    assert_eq!(v["verdict"]["verdict"], "yes");
    assert!(!v["drawings"].as_array().unwrap().is_empty());
}

#[test]
fn pipeline_resumes_from_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state");
    // level zero only: the base case is saved and nothing is expanded
    let o = kplane(&[
        "pipeline",
        "--max-iter",
        "0",
        "--state",
        state.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["discovered"], 1);
    assert!(state.join("index.json").exists());
    let again = kplane(&[
        "pipeline",
        "--max-iter",
        "0",
        "--state",
        state.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), stdout(&again));
}
