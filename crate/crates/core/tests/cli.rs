use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use weakest_link::cli::{SERIES_HEADER, SUMMARY_HEADER};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakest-link"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn preset_writes_series_and_summary_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "simulate",
        "--preset",
        "ring-fig2",
        "--out",
        path_str(dir.path()),
        "--jobs",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names.iter().filter(|n| n.ends_with("-series.csv")).count(),
        4
    );
    assert_eq!(
        names.iter().filter(|n| n.ends_with("-summary.csv")).count(),
        4
    );

    let series =
        fs::read_to_string(dir.path().join("ring-fig2-weakest-link-eps0.05-series.csv")).unwrap();
    let lines: Vec<&str> = series.lines().collect();
    assert_eq!(lines[0], SERIES_HEADER);
    assert_eq!(lines.len(), 2001);
    assert!(lines[2000].starts_with("2000,"));

    let summary = fs::read_to_string(dir.path().join("ring-fig2-han-style-summary.csv")).unwrap();
    let rows: Vec<&str> = summary.lines().collect();
    assert_eq!(rows[0], SUMMARY_HEADER);
    assert!(rows[1].starts_with("Han-style (stylized),han-style,true,ring,25,6,"));
    assert_eq!(
        rows[1].split(',').count(),
        SUMMARY_HEADER.split(',').count()
    );
}

#[test]
fn config_run_is_reproducible_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "scenario.kind = \"random\"\nscenario.nodes = 30\nscenario.pairs = 40\nrun.steps = 200\nrun.output = \"r\"\n",
    )
    .unwrap();
    let read = |sub: &str, seed: &str| {
        let out_dir = dir.path().join(sub);
        let out = bin(&[
            "simulate",
            "--config",
            path_str(&cfg),
            "--seed",
            seed,
            "--out",
            path_str(&out_dir),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        fs::read(out_dir.join("r-series.csv")).unwrap()
    };
    let a = read("a", "7");
    assert_eq!(a, read("b", "7"));
    assert_ne!(a, read("c", "8"));
}

#[test]
fn bad_config_fails_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "run.steps = 5\nlearn.epsilonn = 0.1\n").unwrap();
    let out = bin(&[
        "simulate",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(dir.path()),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("epsilonn") && err.contains("line 2"), "{err}");

    fs::write(&cfg, "learn.init_alpha = 2.0\nrun.steps = 0\n").unwrap();
    let out = bin(&["validate", "--config", path_str(&cfg)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("init_alpha") && err.contains("run.steps"),
        "{err}"
    );

    let out = bin(&["simulate", "--preset", "ring-fig7"]);
    assert!(!out.status.success());
}

#[test]
fn validate_accepts_generated_and_rejects_broken_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ring.toml");
    fs::write(&cfg, "run.steps = 3\nrun.output = \"ring\"\n").unwrap();
    assert!(bin(&["validate", "--config", path_str(&cfg)])
        .status
        .success());

    let out = bin(&[
        "simulate",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(dir.path()),
        "--save-scenario",
    ]);
    assert!(out.status.success());
    let saved = dir.path().join("ring-scenario.toml");
    assert!(bin(&["validate", "--scenario", path_str(&saved)])
        .status
        .success());

    let text = fs::read_to_string(&saved).unwrap();
    let broken = dir.path().join("broken.toml");
    fs::write(&broken, text.replacen("[0, 1, 2,", "[0, 0, 2,", 1)).unwrap();
    let out = bin(&["validate", "--scenario", path_str(&broken)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("more than once"));
}

#[test]
fn check_nash_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ring.toml");
    fs::write(&cfg, "scenario.nodes = 9\n").unwrap();
    let zero = bin(&[
        "check-nash",
        "--config",
        path_str(&cfg),
        "--grid",
        "0.1",
        "--tol",
        "1e-9",
    ]);
    assert!(zero.status.success());
    let one = bin(&["check-nash", "--config", path_str(&cfg), "--alpha", "1"]);
    assert_eq!(one.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&one.stdout).contains("deviate to 0"));
}
