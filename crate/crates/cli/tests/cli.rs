use std::fs;
use std::process::{Command, Output};

fn rispace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rispace")).args(args).output().expect("spawn rispace")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const SQRT: &str = r#"{"op":"pow","arg":"t","exp":0.5}"#;

#[test]
fn empty_suite_passes() {
    let o = rispace(&["check", "--suite", "empty"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn unknown_check_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    fs::write(&cfg, r#"{"checks":[{"name":"no_such_check"}]}"#).unwrap();
    let o = rispace(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_such_check"));
}

#[test]
fn unknown_suite_and_bad_grid() {
    assert_eq!(code(&rispace(&["check", "--suite", "nope"])), 2);
    assert_eq!(code(&rispace(&["tabulate", "phi", "--phi", SQRT, "--grid", "1,0.5,3"])), 2);
    assert_eq!(code(&rispace(&["tabulate", "phi", "--phi", "not_a_name"])), 2);
}

#[test]
fn psi_csv() {
    let o = rispace(&["tabulate", "psi", "--phi", SQRT, "--grid", "0.01,100,5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,psi"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!((r[1] - 0.5 * r[0].sqrt()).abs() <= 1e-9 * r[1]);
    }
}

#[test]
fn suite_writes_reports_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    fs::write(
        &cfg,
        r#"{"grid":{"t_min":0.01,"t_max":100.0,"count":9},"seed":3,"checks":[
            {"name":"rearrangement_oracle","params":{"count":40}},
            {"name":"range_nonexistence","params":{"space":{"space":"l1"}}}
        ]}"#,
    )
    .unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = rispace(&["check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let mut names: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        names.into_iter().map(|n| fs::read(out.join(n)).unwrap()).collect::<Vec<_>>()
    };
    let a = run("a");
    assert_eq!(a.len(), 3);
    assert_eq!(a, run("b"));
    let summary = String::from_utf8(a[2].clone()).unwrap();
    assert!(summary.starts_with("check,verdict,band_min,band_max\n"));
    assert!(summary.contains("range_nonexistence,correctly_rejected"));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    fs::write(&cfg, r#"{"grid":{"t_min":0.01,"t_max":100.0,"count":9},"checks":[{"name":"range_nonexistence","params":{"space":{"space":"l1_cap_linf"}}}]}"#)
        .unwrap();
    let o = rispace(&["check", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("range_nonexistence,fail"));
}

#[test]
fn classh_report_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("op.json");
    fs::write(&op, r#""S""#).unwrap();
    let out = dir.path().join("report.json");
    let o = rispace(&["classh", "verify", "--operator", op.to_str().unwrap(), "--corpus", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["corpus_size"], 10);
}

#[test]
fn range_of_l1_is_existence_failure() {
    let o = rispace(&["range", "--space", r#"{"space":"l1"}"#, "--grid", "0.1,10,3"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("existence"));
}
