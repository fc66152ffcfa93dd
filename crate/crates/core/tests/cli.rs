use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_mubarg");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("MUBARG_SEED").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    let out = run(args);
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn quick_subcommands_pass() {
    let cases: &[&[&str]] = &[
        &["measures-verify", "--mu", "-0.4,0,2.5"],
        &["moments", "--mu", "0.5", "--lambda", "2", "--degree", "20"],
        &["transform", "--mu", "1"],
        &["entropy", "--mu", "0", "--trial", "psi3"],
        &["energy", "--mu", "0", "--trial", "rand-full-02"],
        &["rlsi", "--mu", "0.5", "--c", "2,4", "--trial", "exp-even-c1"],
        &["compare", "--mu", "-0.25,1", "--trial", "psi5"],
        &["htnorm", "--p", "2", "--q", "2", "--a", "0", "--mu", "0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("checks passed"));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["rlsi", "--c", "0.5"]), 2);
    assert_eq!(code(&["rlsi", "--mu", "-0.5"]), 2);
    assert_eq!(code(&["rlsi", "--mu", "abc"]), 2);
    assert_eq!(code(&["dirichlet", "--mu", "-0.2"]), 2);
    assert_eq!(code(&["stein", "--t", "1.5"]), 2);
    assert_eq!(code(&["rlsi", "--trial", "nonsense"]), 2);
    assert_eq!(code(&["rlsi", "--format", "xml"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn numeric_failure_exits_one() {
    let out = run(&["moments", "--mu", "0.5", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numeric error"));
}

#[test]
fn unwritable_output_exits_two() {
    assert_eq!(code(&["measures-verify", "--out", "/nonexistent/dir/report"]), 2);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "rlsi".to_string(),
            "--mu".into(),
            "0,1".into(),
            "--trial".into(),
            "rand-odd-04".into(),
            "--format".into(),
            "both".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    for out in [&a, &b] {
        let status = Command::new(BIN).args(args(out)).env_remove("MUBARG_SEED").output().unwrap().status;
        assert!(status.success());
    }
    for ext in ["json", "csv"] {
        let x = std::fs::read(a.with_extension(ext)).unwrap();
        let y = std::fs::read(b.with_extension(ext)).unwrap();
        assert_eq!(x, y, "{ext}");
    }
    let report = read_json(&a.with_extension("json"));
    assert_eq!(report["meta"]["command"], "rlsi");
    assert!(report["cells"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "# checks at one mu\nmu = 1.0\nc = 4\nseed = 7\ntrial = psi2\n").unwrap();
    let out = dir.path().join("r");
    let cfg = config.display().to_string();
    let out_s = out.display().to_string();

    assert_eq!(code(&["rlsi", "--config", &cfg, "--out", &out_s]), 0);
    let report = read_json(&out.with_extension("json"));
    assert_eq!(report["meta"]["seed"], 7);
    let key = report["cells"][0]["cell"].as_str().unwrap().to_string();
    assert!(key.starts_with("mu=1/") && key.contains("c=4"), "{key}");

    // flags beat the file
    assert_eq!(code(&["rlsi", "--config", &cfg, "--mu", "0.5", "--out", &out_s]), 0);
    let report = read_json(&out.with_extension("json"));
    assert!(report["cells"][0]["cell"].as_str().unwrap().starts_with("mu=0.5/"));

    // the environment seed beats the file but not the flag
    let status = Command::new(BIN)
        .args(["rlsi", "--config", &cfg, "--out", &out_s])
        .env("MUBARG_SEED", "11")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(read_json(&out.with_extension("json"))["meta"]["seed"], 11);
    let status = Command::new(BIN)
        .args(["rlsi", "--config", &cfg, "--seed", "13", "--out", &out_s])
        .env("MUBARG_SEED", "11")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(read_json(&out.with_extension("json"))["meta"]["seed"], 13);

    std::fs::write(&config, "colour = blue\n").unwrap();
    assert_eq!(code(&["rlsi", "--config", &cfg]), 2);
    assert_eq!(code(&["rlsi", "--config", "/nonexistent.conf"]), 2);
}

#[test]
fn trial_from_coefficient_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    std::fs::write(&file, "[[0.0, 0.0], [1.0, 0.5], [0.0, 0.0], [0.25, -1.0]]").unwrap();
    let trial = file.display().to_string();
    assert_eq!(code(&["rlsi", "--mu", "0.5", "--c", "2", "--trial", &trial]), 0);
    std::fs::write(&file, "[[1.0]]").unwrap();
    assert_eq!(code(&["rlsi", "--mu", "0.5", "--trial", &trial]), 2);
}

#[test]
fn csv_output_has_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.anything");
    let out_s = out.display().to_string();
    assert_eq!(code(&["measures-verify", "--mu", "0,1", "--format", "csv", "--out", &out_s]), 0);
    let text = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(!out.with_extension("json").exists());
}
