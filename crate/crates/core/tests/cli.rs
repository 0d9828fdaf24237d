use std::path::Path;
use std::process::{Command, Output};

use heisenflow::validation::config::RunConfig;
use heisenflow::validation::io::{read_csv, read_field};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisenflow"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(o: &Output, key: &str) -> f64 {
    let text = stdout(o);
    let line = text
        .lines()
        .find(|l| l.starts_with(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"));
    line.split(" = ").nth(1).unwrap().parse().unwrap()
}

/// Small heat-kernel ball setup that runs in well under a second.
const SMALL: [&str; 14] = [
    "--set",
    "grid.n1=25",
    "--set",
    "grid.n2=25",
    "--set",
    "grid.n3=25",
    "--set",
    "grid.box=1.6,1.6,1.2",
    "--set",
    "shape.radius=1.0",
    "--set",
    "snapshots=0,0.05,0.1",
    "--set",
    "theta=1",
];

fn small(cmd: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--out",
        out.to_str().unwrap(),
        "--eps",
        "0.3",
        "--dt",
        "0.05",
        "--t-end",
        "0.1",
    ];
    args.extend_from_slice(&SMALL);
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn equilibria_prints_the_three_roots() {
    let o = run(&["equilibria", "--beta", "1.2", "--a", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "beta,a,m_minus,m_zero,m_plus");
    let v: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(v[0], 1.2);
    assert_eq!(v[3], 0.0);
    assert!((v[4] - 0.6585).abs() < 5e-4);
    assert_eq!(v[2], -v[4]);
}

#[test]
fn help_and_version_exit_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("validate-ball"));
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["equilibria", "--beta", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["equilibria", "--set", "nonsense.key=1"]).status.code(), Some(2));
    assert_eq!(run(&["equilibria", "--set", "beta"]).status.code(), Some(2));
    assert_eq!(run(&["equilibria", "--beta", "0.9"]).status.code(), Some(2));
    assert_eq!(
        run(&["equilibria", "--config", "/nonexistent/run.cfg"]).status.code(),
        Some(2)
    );
    let o = run(&["equilibria", "--set", "kernel.kind=gauss"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kernel.kind"));
}

#[test]
fn coarse_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("evolve", dir.path(), &["--set", "grid.n1=7"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_and_overrides_are_resolved() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "beta = 1.5\n# comment\nkernel.kind = bump\n").unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "instanton",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "kernel.support=2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let resolved = RunConfig::load(&out.join("config.resolved.txt")).unwrap();
    let expect = RunConfig {
        beta: 1.5,
        kernel_kind: heisenflow::validation::config::KernelKind::Bump,
        kernel_support: 2.0,
        ..RunConfig::default()
    };
    assert_eq!(resolved, expect);

    let t = read_csv(&out.join("instanton.csv")).unwrap();
    assert_eq!(t.header, ["r", "m", "dm_dr"]);
    let m: Vec<f64> = t.rows.iter().map(|r| r[1]).collect();
    assert!(m.windows(2).all(|w| w[1] >= w[0]));
    assert!((m[m.len() / 2]).abs() == 0.0);
    assert!(value(&o, "residual") < 1e-8);
}

#[test]
fn theta_of_the_heat_kernel_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["theta", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!((value(&o, "theta") - 1.0).abs() < 1e-3);
    assert!(value(&o, "relative_change") < 1e-4);
    let t = read_csv(&dir.path().join("theta.csv")).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][0], value(&o, "theta"));
}

#[test]
fn evolve_writes_diagnostics_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("evolve", dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d = read_csv(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(d.rows.len(), 3);
    let radius = d.header.iter().position(|h| h == "radius").unwrap();
    assert!(d.rows[2][radius] < d.rows[0][radius]);
    for k in 0..3 {
        let f = read_field(&dir.path().join(format!("field_{k:03}.txt"))).unwrap();
        assert_eq!(f.grid.dims, [25, 25, 25]);
        assert!(f.max() <= 1.0 && f.min() >= -1.0);
    }
    assert!(!dir.path().join("field_003.txt").exists());
}

#[test]
fn evolve_with_forcing_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("evolve", dir.path(), &["--set", "delta_force=0.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = |name: &str| read_csv(&dir.path().join(format!("diagnostics_{name}.csv"))).unwrap();
    let (lo, mid, hi) = (r("lower"), r("unforced"), r("upper"));
    let col = lo.header.iter().position(|h| h == "min").unwrap();
    for k in 0..lo.rows.len() {
        assert!(lo.rows[k][col] <= mid.rows[k][col] && mid.rows[k][col] <= hi.rows[k][col]);
    }
}

#[test]
fn snapshot_off_the_time_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("evolve", dir.path(), &["--set", "snapshots=0,0.07"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn calibrate_reports_theta() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "calibrate",
        "--out",
        dir.path().to_str().unwrap(),
        "--eps",
        "0.2",
        "--dt",
        "0.034",
        "--set",
        "grid.n1=60",
        "--set",
        "grid.box=2.5,2.5,1",
        "--set",
        "calibrate.radius=1.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let theta = value(&o, "theta");
    let lambda = value(&o, "lambda");
    assert!((lambda - 0.85).abs() < 1e-12);
    assert!((value(&o, "theta_effective") - theta * (1.0 + lambda)).abs() < 1e-12);
    assert!((value(&o, "theta_effective") - 1.0).abs() < 0.25);
    assert!(value(&o, "r_squared") > 0.99);
    let t = read_csv(&dir.path().join("calibration.csv")).unwrap();
    assert!(t.rows.len() >= 10);
    assert!(t.rows.windows(2).all(|w| w[1][1] < w[0][1]));
}

#[test]
fn validate_ball_writes_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("validate-ball", dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("intercepts_decreasing = true"));
    let rep = read_csv(&dir.path().join("ball_report.csv")).unwrap();
    assert_eq!(rep.header, ["t", "hausdorff", "x3_intercept", "exact_x3_intercept"]);
    assert_eq!(rep.rows.len(), 3);
    assert!(rep.rows[0][1] < 0.1);
    for k in 0..3 {
        let c = read_csv(&dir.path().join(format!("curve_{k:03}.csv"))).unwrap();
        assert_eq!(c.header, ["x1", "x3"]);
        assert!(c.rows.len() > 8);
        assert!(dir.path().join(format!("exact_{k:03}.csv")).exists());
    }
}

#[test]
fn profiles_and_se2_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = small("profiles", dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_csv(&dir.path().join("profiles.csv")).unwrap();
    assert_eq!(s.rows.len(), 3);
    assert!(dir.path().join("profile_x1_000.csv").exists() && dir.path().join("profile_x3_002.csv").exists());

    let dir = tempfile::tempdir().unwrap();
    let o = small(
        "se2",
        dir.path(),
        &[
            "--set",
            "grid.n1=31",
            "--set",
            "grid.n3=16",
            "--set",
            "shape.radius=0.9",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = read_csv(&dir.path().join("se2_area.csv")).unwrap();
    assert_eq!(a.rows.len(), 3);
    assert!(a.rows[2][1] <= a.rows[0][1]);
    let f = read_field(&dir.path().join("field_000.txt")).unwrap();
    assert!(f.grid.periodic[2]);
}
