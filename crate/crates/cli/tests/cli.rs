//! End-to-end checks of the installed binary: exit codes, stdout shapes, and
//! CSV determinism through the real command path.

use std::path::PathBuf;
use std::process::{Command, Output};

fn rasec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rasec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("rasec-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_reports_derived_quantities() {
    let cfg = write_config("empty.conf", "");
    let out = rasec(&["validate", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# alpha_max = 2.621848"));
    assert!(text.contains("# ok"));
}

#[test]
fn config_errors_exit_2() {
    let cfg = write_config("bad.conf", "[scenario]\nbeta_b = -1\n");
    let out = rasec(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = rasec(&["optimize", "/nonexistent/path.conf"]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config("badline.conf", "[scenario]\nzeta_0 = banana\n");
    let out = rasec(&["los-solve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn los_solve_reports_branch_and_angles() {
    let cfg = write_config("p25.conf", "[scenario]\np_dbm = 25\n");
    let out = rasec(&["los-solve", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("HighSnrBoundary"), "{text}");
    assert!(text.contains("alpha_opt        = 2.621848"), "{text}");
    assert!(text.contains("deflection_angles"), "{text}");
}

#[test]
fn avg_capacity_quad_matches_library_value() {
    let cfg = write_config("cap.conf", "");
    let out = rasec(&[
        "avg-capacity",
        cfg.to_str().unwrap(),
        "--alpha",
        "1.8",
        "--method",
        "quad",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.693"), "{text}");
}

#[test]
fn figure_csv_is_deterministic_across_invocations() {
    let cfg = write_config(
        "fig2small.conf",
        "[sweep]\nvariable = alpha\nstart = 1.0\nstop = 2.5\nstep = 0.5\n[estimator]\nmc_samples = 20000\nseed = 9\n",
    );
    let dir = std::env::temp_dir().join("rasec-cli-tests");
    let out1 = dir.join("fig2-a.csv");
    let out2 = dir.join("fig2-b.csv");
    for out in [&out1, &out2] {
        let run = rasec(&[
            "figure",
            "fig2",
            cfg.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ]);
        assert!(run.status.success());
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "figure output differs between identical runs");
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("# seed = 9"));
    assert!(text.starts_with("# figure fig2"));
}

#[test]
fn unknown_figure_rejected() {
    let cfg = write_config("empty2.conf", "");
    let out = rasec(&["figure", "fig9", cfg.to_str().unwrap(), "-o", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}
