use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{KernelKind, RunConfig};
use super::io::{write_csv, write_field, Table};
use super::{
    calibrate_theta_cylinder, extract_profiles, instanton_for_kernel, validate_gauge_ball, BallSetup, CylinderSetup,
    LevelCurve, REFERENCE_HEAT_THETA,
};
use crate::engine::{evolve, forcing_bracket, init_levelset_field, StepDiagnostics};
use crate::error::{Error, Result};
use crate::profile::{compute_theta, equilibria};
use crate::se2::{init_lifted_disk, projected_area, se2_evolve, se2_grid};

#[derive(Parser, Debug)]
#[command(
    name = "heisenflow",
    version,
    about = "Mean-field interface dynamics on the Heisenberg group and SE(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    /// Constant forcing `a`.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constant solutions of m = tanh(beta (m + a)).
    Equilibria(Common),
    /// One-dimensional standing wave.
    Instanton(Common),
    /// Mobility by quadrature.
    Theta(Common),
    /// Evolve the configured initial shape.
    Evolve(Common),
    /// Mobility from a shrinking cylinder.
    Calibrate(Common),
    /// Compare a gauge-ball run with the exact solution.
    ValidateBall(Common),
    /// Axis profiles of a gauge-ball run.
    Profiles(Common),
    /// Evolve a lifted disk on SE(2).
    Se2(Common),
}

/// Exit code for an error: 2 for usage and configuration problems, 1 for
/// numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Io(_)
        | Error::InvalidParameter(_)
        | Error::InvalidGrid(_)
        | Error::ResolutionTooCoarse { .. }
        | Error::SupportUnresolved { .. }
        | Error::KernelKindMismatch => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn resolve(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k, v)?;
    }
    if let Some(v) = c.beta {
        cfg.beta = v;
    }
    if let Some(v) = c.a {
        cfg.forcing_a = v;
    }
    if let Some(v) = c.eps {
        cfg.eps = v;
    }
    if let Some(v) = c.dt {
        cfg.dt = v;
    }
    if let Some(v) = c.t_end {
        cfg.t_end = v;
    }
    Ok(cfg)
}

/// Creates the output directory and writes the resolved config into it.
fn prepare(out: &Path, cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("config.resolved.txt"), cfg.to_text())?;
    Ok(())
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn diagnostics_table(d: &[StepDiagnostics]) -> Result<Table> {
    let mut t = Table::new(["step", "t", "min", "max", "radius", "x3_upper", "x3_lower"]);
    for s in d {
        t.push(vec![
            s.step as f64,
            s.t,
            s.min,
            s.max,
            opt(s.radius),
            opt(s.x3_upper),
            opt(s.x3_lower),
        ])?;
    }
    Ok(t)
}

fn curve_table(c: &LevelCurve, names: [&str; 2]) -> Result<Table> {
    let mut t = Table::new(names);
    for p in &c.points {
        t.push(vec![p[0], p[1]])?;
    }
    Ok(t)
}

fn cylinder_setup(cfg: &RunConfig) -> Result<CylinderSetup> {
    let params = cfg.params()?;
    let sample_every = if cfg.calibrate_sample_every > 0 {
        cfg.calibrate_sample_every
    } else {
        CylinderSetup::auto_sample_every(cfg.calibrate_radius, params.dt)
    };
    let t_end = params.t_end.max(cfg.calibrate_radius.powi(2));
    Ok(CylinderSetup {
        params: crate::engine::EvolutionParams { t_end, ..params },
        radius: cfg.calibrate_radius,
        half_width: cfg.grid_box[0],
        n: cfg.grid_n[0],
        sample_every,
    })
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Equilibria(c) => {
            let cfg = resolve(&c)?;
            let e = equilibria(cfg.beta, cfg.forcing_a)?;
            println!("beta,a,m_minus,m_zero,m_plus");
            println!("{},{},{},{},{}", cfg.beta, cfg.forcing_a, e.m_minus, e.m_zero, e.m_plus);
            Ok(0)
        }
        Command::Instanton(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let (prof, _) = instanton_for_kernel(&cfg.kernel()?, cfg.beta)?;
            let mut t = Table::new(["r", "m", "dm_dr"]);
            for ((r, m), d) in prof.grid.nodes().into_iter().zip(&prof.values).zip(prof.derivative()) {
                t.push(vec![r, *m, d])?;
            }
            write_csv(&c.out.join("instanton.csv"), &t)?;
            println!("m_beta = {}", prof.m_beta);
            println!("residual = {:e}", prof.residual);
            println!("iterations = {}", prof.iterations);
            Ok(0)
        }
        Command::Theta(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let kernel = cfg.kernel()?;
            let (prof, _) = instanton_for_kernel(&kernel, cfg.beta)?;
            let marg = kernel.marginals();
            let th = compute_theta(marg.as_ref(), &prof, 129)?;
            let fine = compute_theta(marg.as_ref(), &prof, 257)?;
            let rel = (fine.theta - th.theta).abs() / th.theta;
            let mut t = Table::new(["theta", "theta_refined", "relative_change", "norm"]);
            t.push(vec![th.theta, fine.theta, rel, th.norm])?;
            write_csv(&c.out.join("theta.csv"), &t)?;
            println!("theta = {}", th.theta);
            println!("theta_refined = {}", fine.theta);
            println!("relative_change = {rel:e}");
            Ok(0)
        }
        Command::Evolve(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let p = cfg.params()?;
            let grid = cfg.grid()?;
            let (prof, _) = instanton_for_kernel(&p.kernel, p.beta)?;
            let m0 = init_levelset_field(cfg.shape(), p.eps, &prof, &grid)?;
            if cfg.delta_force > 0.0 {
                let b = forcing_bracket(&m0, &p, cfg.delta_force, &cfg.snapshots)?;
                for (name, tr) in [("lower", &b.lower), ("unforced", &b.unforced), ("upper", &b.upper)] {
                    write_csv(
                        &c.out.join(format!("diagnostics_{name}.csv")),
                        &diagnostics_table(&tr.diagnostics)?,
                    )?;
                }
                for (k, m) in b.unforced.snapshots.iter().enumerate() {
                    write_field(&c.out.join(format!("field_{k:03}.txt")), m)?;
                }
                println!("bracket held for {} steps", p.steps());
            } else {
                let tr = evolve(&m0, &p, &cfg.snapshots)?;
                write_csv(&c.out.join("diagnostics.csv"), &diagnostics_table(&tr.diagnostics)?)?;
                for (k, m) in tr.snapshots.iter().enumerate() {
                    write_field(&c.out.join(format!("field_{k:03}.txt")), m)?;
                }
                println!("steps = {}", p.steps());
            }
            Ok(0)
        }
        Command::Calibrate(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let setup = cylinder_setup(&cfg)?;
            let (prof, _) = instanton_for_kernel(&setup.params.kernel, cfg.beta)?;
            let cal = calibrate_theta_cylinder(&setup, &prof)?;
            let mut t = Table::new(["t", "radius", "in_fit"]);
            for &(time, r) in &cal.radii {
                t.push(vec![time, r, if r >= 4.0 * cfg.eps { 1.0 } else { 0.0 }])?;
            }
            write_csv(&c.out.join("calibration.csv"), &t)?;
            println!("theta = {}", cal.theta);
            println!("theta_effective = {}", cal.theta_effective);
            println!("lambda = {}", cal.lambda);
            println!("r_squared = {}", cal.fit.r_squared);
            println!("samples = {}", cal.fit.samples.len());
            match cfg.kernel_kind {
                KernelKind::Heat => {
                    println!("deviation_from_0.56561 = {}", cal.theta / REFERENCE_HEAT_THETA - 1.0);
                }
                KernelKind::Bump => {
                    let kernel = cfg.kernel()?;
                    let q = compute_theta(kernel.marginals().as_ref(), &prof, 129)?;
                    println!("theta_quadrature = {}", q.theta);
                    println!("deviation_effective = {}", cal.theta_effective / q.theta - 1.0);
                }
            }
            Ok(0)
        }
        Command::ValidateBall(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let p = cfg.params()?;
            let (prof, _) = instanton_for_kernel(&p.kernel, p.beta)?;
            let theta = match cfg.theta {
                Some(t) => t,
                None => {
                    let cal = calibrate_theta_cylinder(&cylinder_setup(&cfg)?, &prof)?;
                    println!("calibrated theta = {}", cal.theta);
                    cal.theta
                }
            };
            let setup = BallSetup {
                params: p,
                radius: cfg.shape_radius,
                theta,
                grid: cfg.grid()?,
                snapshot_times: cfg.snapshots.clone(),
            };
            let rep = validate_gauge_ball(&setup, &prof)?;
            let mut t = Table::new(["t", "hausdorff", "x3_intercept", "exact_x3_intercept"]);
            for (k, s) in rep.snapshots.iter().enumerate() {
                t.push(vec![s.t, s.hausdorff, opt(s.x3_intercept), s.exact_x3_intercept])?;
                write_csv(
                    &c.out.join(format!("curve_{k:03}.csv")),
                    &curve_table(&s.curve, ["x1", "x3"])?,
                )?;
                write_csv(
                    &c.out.join(format!("exact_{k:03}.csv")),
                    &curve_table(&s.exact, ["x1", "x3"])?,
                )?;
            }
            write_csv(&c.out.join("ball_report.csv"), &t)?;
            write_csv(
                &c.out.join("diagnostics.csv"),
                &diagnostics_table(&rep.trajectory.diagnostics)?,
            )?;
            println!("theta = {theta}");
            println!("extinction_time = {}", rep.extinction_time);
            println!("max_hausdorff_half_extinction = {}", rep.max_hausdorff_until(0.5));
            println!("intercepts_decreasing = {}", rep.intercepts_decreasing);
            Ok(if rep.intercepts_decreasing { 0 } else { 1 })
        }
        Command::Profiles(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let p = cfg.params()?;
            let (prof, _) = instanton_for_kernel(&p.kernel, p.beta)?;
            let m0 = init_levelset_field(cfg.shape(), p.eps, &prof, &cfg.grid()?)?;
            let tr = evolve(&m0, &p, &cfg.snapshots)?;
            let mut summary = Table::new(["t", "max_slope_x1", "max_slope_x3", "ratio"]);
            for (k, (&t, m)) in tr.times.iter().zip(&tr.snapshots).enumerate() {
                let pr = extract_profiles(m, t);
                for (name, axis) in [("x1", &pr.x1), ("x3", &pr.x3)] {
                    let mut tab = Table::new(["s", "m"]);
                    for &(s, v) in &axis.samples {
                        tab.push(vec![s, v])?;
                    }
                    write_csv(&c.out.join(format!("profile_{name}_{k:03}.csv")), &tab)?;
                }
                let (a, b) = (pr.x1.max_slope(), pr.x3.max_slope());
                summary.push(vec![t, a, b, b / a])?;
                println!("t = {t}: slope x1 = {a}, slope x3 = {b}, ratio = {}", b / a);
            }
            write_csv(&c.out.join("profiles.csv"), &summary)?;
            Ok(0)
        }
        Command::Se2(c) => {
            let cfg = resolve(&c)?;
            prepare(&c.out, &cfg)?;
            let p = cfg.params()?;
            let (prof, _) = instanton_for_kernel(&p.kernel, p.beta)?;
            let grid = se2_grid(cfg.grid_box[0], cfg.grid_n[0], cfg.grid_n[2])?;
            let m0 = init_lifted_disk(cfg.shape_radius, p.eps, &prof, &grid)?;
            let tr = se2_evolve(&m0, &p, &cfg.snapshots)?;
            let mut t = Table::new(["t", "projected_area", "min", "max"]);
            for (k, (&time, m)) in tr.times.iter().zip(&tr.snapshots).enumerate() {
                t.push(vec![time, projected_area(m), m.min(), m.max()])?;
                write_field(&c.out.join(format!("field_{k:03}.txt")), m)?;
            }
            write_csv(&c.out.join("se2_area.csv"), &t)?;
            println!("steps = {}", p.steps());
            Ok(0)
        }
    }
}
