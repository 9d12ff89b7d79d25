use std::process::{Command, Output};

fn recall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recall"))
        .args(args)
        .env_remove("RECALL_SEED")
        .output()
        .expect("failed to spawn recall")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_prints_report_json() {
    let out = recall(&["analyze", "--n", "1024", "--m", "2", "--delta", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(v["N"], 1024);
    assert_eq!(v["queries_per_run"], 19);
    assert_eq!(v["r_integer"], 8);
    assert_eq!(v["q_integer"], 152);
    assert_eq!(v["q_duality"], 18.0);
    assert_eq!(v["duality_log_base"], 2);
    assert!((v["q_real"].as_f64().unwrap() - 145.2332676057198).abs() < 1e-9);
    assert!(v["meta"]["config"].as_str().unwrap().contains("delta=0.01"));
}

#[test]
fn invalid_delta_exits_2() {
    let out = recall(&["analyze", "--delta", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--delta") && err.contains("(0, 1)"), "{err}");
}

#[test]
fn m_above_n_exits_2() {
    let out = recall(&["analyze", "--n", "8", "--m", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "delta=0.1\nwidth=3\n").unwrap();
    let out = recall(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(recall(&["analyze", "--frobnicate", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# two marked\nn=1024\nm=2\ndelta=0.01\n").unwrap();
    let out = recall(&["analyze", "--config", cfg.to_str().unwrap(), "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 0.05);
    assert_eq!(v["m"], 2);
}

#[test]
fn fig2_preset_rows() {
    let out = recall(&["curves", "--preset", "fig2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# recall "));
    assert_eq!(lines.next(), Some("x,f"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0], "1,1");
    assert!(rows[199].starts_with("200,"));
}

#[test]
fn quantum_check_passes() {
    let out = recall(&["quantum-check", "--max-n", "4096"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["pass"], true);
}

#[test]
fn simulate_is_byte_identical_across_invocations() {
    let args = ["simulate", "--m", "10", "--delta", "0.05", "--trials", "20000", "--seed", "42"];
    let a = recall(&args);
    let b = recall(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["n_trials"], 20000);
    assert_eq!(v["master_seed"], 42);
    assert_eq!(v["per_step_success_rate"].as_array().unwrap().len(), 10);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_recall"));
        cmd.args(["simulate", "--m", "3", "--trials", "100"]);
        match env {
            Some(s) => cmd.env("RECALL_SEED", s),
            None => cmd.env_remove("RECALL_SEED"),
        };
        let v: serde_json::Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["master_seed"].as_u64().unwrap()
    };
    assert_eq!(run(Some("1234")), 1234);
    assert_eq!(run(None), 0);
}

#[test]
fn compare_writes_comparison_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/compare.csv");
    let out = recall(&[
        "compare",
        "--n",
        "1048576",
        "--delta",
        "0.01",
        "--m-range",
        "1:16",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# recall ") && lines[0].contains("seed="));
    assert_eq!(lines[1], "m,N,delta,r_real,r_int,q_real,q_int,q_duality");
    assert_eq!(lines.len(), 18);
    assert!(lines[2].starts_with("1,1048576,0.01,1,1,805,805,20"), "{}", lines[2]);
}

#[test]
fn overall_delta_mode_tightens_steps() {
    let per = recall(&["analyze", "--m", "10", "--delta", "0.1"]);
    let all = recall(&["analyze", "--m", "10", "--delta", "0.1", "--delta-mode", "overall"]);
    let per: serde_json::Value = serde_json::from_slice(&per.stdout).unwrap();
    let all: serde_json::Value = serde_json::from_slice(&all.stdout).unwrap();
    let d = all["delta"].as_f64().unwrap();
    assert!(((1.0 - d).powi(9) - 0.9).abs() < 1e-12);
    assert!(all["r_integer"].as_u64() > per["r_integer"].as_u64());
}

#[test]
fn csv_only_for_tabular_commands() {
    assert_eq!(recall(&["simulate", "--format", "csv", "--trials", "10"]).status.code(), Some(1));
    let out = recall(&["analyze", "--m", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.json");
    let out = recall(&["analyze", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
