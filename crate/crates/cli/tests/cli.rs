//! Binary-level behavior: exit codes, file schemas, overrides, round trips.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn wipt_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wipt-sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn preset_fig5_writes_curve_summary_and_echo() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("fig5.csv");
    let run = wipt_sim(&[
        "preset",
        "fig5",
        "--trials",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{run:?}");

    let curve = read(&out);
    let mut lines = curve.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep_param,sweep_value,tau_s,metric_name,metric_value,std_error"
    );
    // 4 sweep values x 65 grid points.
    assert_eq!(curve.lines().count(), 1 + 4 * 65);
    for value in ["B,0,", "B,2,", "B,4,", "B,full,"] {
        assert!(curve.contains(value), "curve missing rows for {value}");
    }

    let summary = read(&dir.path().join("fig5.summary.csv"));
    assert_eq!(
        summary.lines().next().unwrap(),
        "sweep_value,tau_star_s,objective,ci95_low,ci95_high,feasible"
    );
    assert_eq!(summary.lines().count(), 1 + 4);
    assert!(summary.lines().skip(1).all(|l| l.ends_with(",true")));

    let echo = read(&dir.path().join("fig5.config.txt"));
    assert!(echo.contains("mode=rate_tradeoff"));
    assert!(
        echo.contains("n_trials=200"),
        "--trials must land in the echo"
    );
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let run = wipt_sim(&[
            "preset",
            "fig5",
            "--seed",
            "7",
            "--trials",
            "500",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(run.status.success());
    }
    assert_eq!(read(&a), read(&b));
    assert_eq!(
        read(&dir.path().join("a.summary.csv")),
        read(&dir.path().join("b.summary.csv"))
    );
}

#[test]
fn preset_override_keeps_other_bindings() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("fig6.csv");
    let run = wipt_sim(&[
        "preset",
        "fig6",
        "--set",
        "rho=1.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let echo = read(&dir.path().join("fig6.config.txt"));
    assert!(echo.contains("rho=1"), "{echo}");
    assert!(echo.contains("d_m=50"));
    assert!(echo.contains("Nr=100"));
    assert!(echo.contains("sweep_values=50,100,200"));
}

#[test]
fn config_echo_reruns_to_identical_csv() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let run = wipt_sim(&["preset", "fig6", "--out", first.to_str().unwrap()]);
    assert!(run.status.success());
    let second = dir.path().join("second.csv");
    let rerun = wipt_sim(&[
        "run",
        "--config",
        dir.path().join("first.config.txt").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(rerun.status.success());
    assert_eq!(read(&first), read(&second));
    assert_eq!(
        read(&dir.path().join("first.summary.csv")),
        read(&dir.path().join("second.summary.csv"))
    );
    assert_eq!(
        read(&dir.path().join("first.config.txt")),
        read(&dir.path().join("second.config.txt"))
    );
}

#[test]
fn unknown_preset_exits_2() {
    let dir = tempdir().unwrap();
    let run = wipt_sim(&[
        "preset",
        "fig9",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("fig9"));
}

#[test]
fn unwritable_output_exits_3() {
    let run = wipt_sim(&["preset", "fig6", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn missing_key_exits_2_and_names_it() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("broken.cfg");
    std::fs::write(
        &cfg,
        "mode=rate_tradeoff\nT_ms=5\nP_dbm=30\nP0_dbm=30\ntheta=0.9\nd_m=10\nnu=4\nNt=4\nNr=4\nB=2\n",
    )
    .unwrap();
    let run = wipt_sim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("sigma2_dbm"));
}

#[test]
fn infeasible_min_power_is_a_result_not_an_error() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("mp.cfg");
    std::fs::write(
        &cfg,
        "mode=min_power\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\nd_m=10\n\
         nu=4\nNt=4\nNr=4\nB=2\nR_min_bpshz=1000\nP_lo_dbm=-20\nP_hi_dbm=40\nn_trials=200\n",
    )
    .unwrap();
    let out = dir.path().join("mp.csv");
    let run = wipt_sim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    let summary = read(&dir.path().join("mp.summary.csv"));
    assert!(
        summary.lines().nth(1).unwrap().ends_with(",false"),
        "{summary}"
    );
}

#[test]
fn re_region_emits_the_documented_schema() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("re.cfg");
    std::fs::write(
        &cfg,
        "mode=re_region\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\nd_m=10\n\
         nu=4\nNt=4\nNr=4\nseed=3\nknob_grid_points=11\n",
    )
    .unwrap();
    let out = dir.path().join("re.csv");
    let run = wipt_sim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let csv = read(&out);
    assert_eq!(
        csv.lines().next().unwrap(),
        "protocol,knob,rate_bpshz,energy_j"
    );
    assert_eq!(csv.lines().count(), 1 + 2 * 11);
    assert!(csv.contains("time_division,"));
    assert!(csv.contains("power_splitting,"));
    assert!(!dir.path().join("re.summary.csv").exists());
}

#[test]
fn malformed_set_flag_exits_2() {
    let dir = tempdir().unwrap();
    let run = wipt_sim(&[
        "preset",
        "fig6",
        "--set",
        "rho0.9",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
}
