use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_policy-game-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_reports_both_modes() {
    let v = json(&["analyze", "--beta", "0.7", "--delta", "0.9"]);
    assert_eq!(v["baseline"]["pi_best_enforceable"], 0.0526315789474);
    assert_eq!(v["behavioral"]["discount_factor"], 0.63);
    assert_eq!(v["behavioral"]["pi_best_enforceable"], 0.226993865031);
    assert_eq!(v["behavioral"]["range_width"], 0.773006134969);
    assert_eq!(v["config"]["q"], 0.9);
}

#[test]
fn beta_one_blocks_match() {
    let v = json(&[
        "analyze", "--a", "2", "--b-bar", "1.5", "--beta", "1", "--delta", "0.8",
    ]);
    let (mut base, mut behav) = (v["baseline"].clone(), v["behavioral"].clone());
    base["mode"] = Value::Null;
    behav["mode"] = Value::Null;
    assert_eq!(base, behav);
}

#[test]
fn simulate_csv_shows_naive_reversal() {
    let out = run(&[
        "simulate",
        "--beta",
        "0.4",
        "--beta-hat",
        "1",
        "--delta",
        "0.9",
        "--target",
        "0.4",
        "--horizon",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("t,"));
    assert!(lines[1].contains("CHEAT,COMPLY,true"), "{}", lines[1]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("# config: {"));
}

#[test]
fn sweep_to_file_is_reproducible() {
    let (p1, p2) = (scratch("s1.csv"), scratch("s2.csv"));
    for p in [&p1, &p2] {
        let out = run(&[
            "sweep",
            "--q-grid",
            "0.5,0.9",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 91);
    assert!(p1.with_file_name("s1.baseline.csv").exists());
}

#[test]
fn seeded_shock_simulation_is_reproducible() {
    let cfg = scratch("shock.json");
    std::fs::write(
        &cfg,
        r#"{"beta": 0.5, "betaHat": 0.8, "target": 0.3, "horizon": 50,
            "shock": {"kind": "uniform", "lo": 0.5, "hi": 1.5}, "shockDraws": 1000}"#,
    )
    .unwrap();
    let go = |seed: &str| {
        run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(go("7"), go("7"));
    assert_ne!(go("7"), go("8"));
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("override.json");
    std::fs::write(&cfg, r#"{"a": 2, "beta": 0.5, "delta": 0.9}"#).unwrap();
    let v = json(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "0.7",
    ]);
    assert_eq!(v["config"]["a"], 2.0);
    assert_eq!(v["config"]["beta"], 0.7);
}

#[test]
fn unknown_config_key_is_rejected() {
    let cfg = scratch("unknown.json");
    std::fs::write(&cfg, r#"{"a": 1, "alpha": 2}"#).unwrap();
    let out = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn exit_codes() {
    // Invalid input.
    assert_eq!(run(&["analyze", "--a", "-1"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--beta", "0.9", "--beta-hat", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["analyze", "--nonsense"]).status.code(), Some(2));
    // I/O.
    assert_eq!(
        run(&["analyze", "--output", "/nonexistent/dir/x.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["analyze", "--config", "/nonexistent/cfg.json"])
            .status
            .code(),
        Some(1)
    );
    // Numerical.
    let out = run(&["analyze", "--a", "1e-300", "--b-bar", "1e300"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflows"));
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
    assert!(text.contains("0 failed"));
}
