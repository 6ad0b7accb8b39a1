use std::fs;
use std::process::{Command, Output};

fn binotail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binotail"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_exact_and_decimal() {
    let o = binotail(&["eval", "tail-above-mean", "-m", "2", "-p", "3/5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "9/25 (0.36)\n");

    let o = binotail(&["eval", "cdf", "-m", "10", "-p", "1/10", "-k", "1"]);
    assert_eq!(stdout(&o), "7360989291/10000000000 (0.7360989291)\n");
}

#[test]
fn eval_camp_paulson_and_lemma2() {
    let o = binotail(&[
        "eval",
        "camp-paulson",
        "-m",
        "10",
        "-p",
        "1/10",
        "-j",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let est: f64 = v["estimate"].as_str().unwrap().parse().unwrap();
    let bound: f64 = v["error_bound"].as_str().unwrap().parse().unwrap();
    assert!((est - 0.7360989291).abs() <= bound);

    let o = binotail(&["eval", "lemma2", "-m", "2", "-k", "1"]);
    let value: f64 = stdout(&o).trim().parse().unwrap();
    assert!(value >= 0.75);
}

#[test]
fn hypothesis_violation_exits_two() {
    let o = binotail(&["eval", "theorem-margin", "-m", "2", "-p", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p > 1/m"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(binotail(&["verify", "BOGUS"]).status.code(), Some(64));
    assert_eq!(
        binotail(&["eval", "pmf", "-m", "3"]).status.code(),
        Some(64)
    );
    assert_eq!(
        binotail(&["eval", "rho", "-m", "2", "--format", "xml"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        binotail(&["verify", "THEOREM_MAIN", "--max-m", "0"])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn verify_json_lines() {
    let o = binotail(&[
        "verify",
        "THEOREM_MAIN",
        "LEMMA2_RATIO",
        "--max-m",
        "10",
        "--denom",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let reports: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["claim"], "THEOREM_MAIN");
    assert_eq!(reports[0]["pass"], true);
    assert_eq!(reports[0]["worst_witness"]["m"], 2);
    assert_eq!(reports[0]["worst_witness"]["p"], "10/19");
    assert!(reports[0].get("elapsed").is_none());
    assert_eq!(reports[1]["claim"], "LEMMA2_RATIO");
}

#[test]
fn thread_count_does_not_change_reports() {
    let run = |threads: &str| {
        binotail(&[
            "verify",
            "all",
            "--max-m",
            "14",
            "--denom",
            "28",
            "--format",
            "json",
            "--threads",
            threads,
        ])
        .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let panels = dir.path().join("panels");
    let o = binotail(&[
        "figure",
        "pmf-panels",
        "--out",
        panels.to_str().unwrap(),
        "--panel",
        "2:1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(panels.join("pmf_m2_p1-2.csv")).unwrap();
    assert_eq!(csv, "k,probability\n0,0.25\n1,0.5\n2,0.25\n");

    let grid = dir.path().join("grid.csv");
    let o = binotail(&[
        "figure",
        "grid-vs-bound",
        "--out",
        grid.to_str().unwrap(),
        "--m",
        "2,22",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&grid).unwrap();
    assert_eq!(csv.lines().count(), 1 + 1 + 21);

    let o = binotail(&["figure", "tail-curves", "--m", "2", "--step", "1/4"]);
    assert_eq!(
        stdout(&o),
        "p,m,\"F(m,p)\",region\n0,2,1,dotted\n0.25,2,0.4375,dotted\n0.5,2,0.75,dotted\n\
         0.75,2,0.5625,solid\n1,2,1,solid\n"
    );
}

#[test]
fn unwritable_output_exits_74() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("grid.csv");
    let o = binotail(&["figure", "grid-vs-bound", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(74));
    let o = binotail(&["figure", "pmf-panels", "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(74));
}
