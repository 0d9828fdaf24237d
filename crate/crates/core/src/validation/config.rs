use std::fmt::Write as _;
use std::path::Path;

use crate::engine::{EvolutionParams, Shape};
use crate::error::{Error, Result};
use crate::geometry::UniformGrid3;
use crate::kernel::KernelSpec;

/// Smoother of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Heat,
    Bump,
}

/// Initial shape of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Ball,
    Cylinder,
    Halfspace,
}

/// Resolved run configuration. Text form is one `key = value` per line with
/// `#` comments; lists are comma separated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beta: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    pub forcing_a: f64,
    pub kernel_kind: KernelKind,
    /// Support parameter `s` of the bump kernel.
    pub kernel_support: f64,
    pub grid_n: [usize; 3],
    /// Half-widths of the box `[−b1, b1] × [−b2, b2] × [−b3, b3]`.
    pub grid_box: [f64; 3],
    pub snapshots: Vec<f64>,
    pub shape_kind: ShapeKind,
    pub shape_radius: f64,
    pub shape_normal: [f64; 3],
    pub delta_force: f64,
    /// Mobility for the exact ball; calibrated when absent.
    pub theta: Option<f64>,
    pub calibrate_radius: f64,
    /// Steps between cylinder radius samples; 0 picks about 50 samples.
    pub calibrate_sample_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            beta: 1.2,
            eps: 0.1,
            dt: 0.008,
            t_end: 0.32,
            forcing_a: 0.0,
            kernel_kind: KernelKind::Heat,
            kernel_support: 3.0,
            grid_n: [128, 128, 128],
            grid_box: [2.0, 2.0, 1.5],
            snapshots: vec![0.0, 0.08, 0.16, 0.24, 0.32],
            shape_kind: ShapeKind::Ball,
            shape_radius: 1.2,
            shape_normal: [0.0, 0.0, 1.0],
            delta_force: 0.0,
            theta: None,
            calibrate_radius: 1.0,
            calibrate_sample_every: 0,
        }
    }
}

/// The configuration shipped with the binary; equal to `RunConfig::default()`.
pub const DEFAULT_CONFIG: &str = include_str!("../../config/default.cfg");

fn num(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: expected a nonnegative integer, got {v:?}")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| num(key, s.trim())).collect()
}

fn triple(key: &str, v: &str) -> Result<[f64; 3]> {
    let l = list(key, v)?;
    l.try_into()
        .map_err(|_| Error::Config(format!("{key}: expected three comma-separated numbers")))
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "beta" => self.beta = num(key, v)?,
            "eps" => self.eps = num(key, v)?,
            "dt" => self.dt = num(key, v)?,
            "t_end" => self.t_end = num(key, v)?,
            "forcing_a" => self.forcing_a = num(key, v)?,
            "kernel.kind" => {
                self.kernel_kind = match v {
                    "heat" => KernelKind::Heat,
                    "bump" => KernelKind::Bump,
                    _ => return Err(Error::Config(format!("kernel.kind: expected heat or bump, got {v:?}"))),
                }
            }
            "kernel.support" => self.kernel_support = num(key, v)?,
            "grid.n1" => self.grid_n[0] = count(key, v)?,
            "grid.n2" => self.grid_n[1] = count(key, v)?,
            "grid.n3" => self.grid_n[2] = count(key, v)?,
            "grid.box" => self.grid_box = triple(key, v)?,
            "snapshots" => self.snapshots = list(key, v)?,
            "shape.kind" => {
                self.shape_kind = match v {
                    "ball" => ShapeKind::Ball,
                    "cylinder" => ShapeKind::Cylinder,
                    "halfspace" => ShapeKind::Halfspace,
                    _ => {
                        return Err(Error::Config(format!(
                            "shape.kind: expected ball, cylinder or halfspace, got {v:?}"
                        )))
                    }
                }
            }
            "shape.radius" => self.shape_radius = num(key, v)?,
            "shape.normal" => self.shape_normal = triple(key, v)?,
            "delta_force" => self.delta_force = num(key, v)?,
            "theta" => {
                self.theta = if v.is_empty() || v == "auto" {
                    None
                } else {
                    Some(num(key, v)?)
                }
            }
            "calibrate.radius" => self.calibrate_radius = num(key, v)?,
            "calibrate.sample_every" => self.calibrate_sample_every = count(key, v)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", n + 1)))?;
            self.set(k, v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", n + 1)),
                e => e,
            })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    /// Text form listing every key, parseable by [`RunConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = match self.kernel_kind {
            KernelKind::Heat => "heat",
            KernelKind::Bump => "bump",
        };
        let shape = match self.shape_kind {
            ShapeKind::Ball => "ball",
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Halfspace => "halfspace",
        };
        let theta = self.theta.map_or("auto".to_string(), |t| t.to_string());
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "eps = {}", self.eps);
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "t_end = {}", self.t_end);
        let _ = writeln!(s, "forcing_a = {}", self.forcing_a);
        let _ = writeln!(s, "kernel.kind = {kind}");
        let _ = writeln!(s, "kernel.support = {}", self.kernel_support);
        let _ = writeln!(s, "grid.n1 = {}", self.grid_n[0]);
        let _ = writeln!(s, "grid.n2 = {}", self.grid_n[1]);
        let _ = writeln!(s, "grid.n3 = {}", self.grid_n[2]);
        let _ = writeln!(s, "grid.box = {}", join(&self.grid_box));
        let _ = writeln!(s, "snapshots = {}", join(&self.snapshots));
        let _ = writeln!(s, "shape.kind = {shape}");
        let _ = writeln!(s, "shape.radius = {}", self.shape_radius);
        let _ = writeln!(s, "shape.normal = {}", join(&self.shape_normal));
        let _ = writeln!(s, "delta_force = {}", self.delta_force);
        let _ = writeln!(s, "theta = {theta}");
        let _ = writeln!(s, "calibrate.radius = {}", self.calibrate_radius);
        let _ = writeln!(s, "calibrate.sample_every = {}", self.calibrate_sample_every);
        s
    }

    pub fn kernel(&self) -> Result<KernelSpec> {
        match self.kernel_kind {
            KernelKind::Heat => Ok(KernelSpec::heat(1.0)),
            KernelKind::Bump => KernelSpec::bump(self.kernel_support),
        }
    }

    pub fn params(&self) -> Result<EvolutionParams> {
        Ok(
            EvolutionParams::new(self.beta, self.eps, self.dt, self.t_end, self.kernel()?)?
                .with_forcing(self.forcing_a),
        )
    }

    pub fn grid(&self) -> Result<UniformGrid3> {
        if self.grid_box.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::Config("grid.box half-widths must be positive".into()));
        }
        UniformGrid3::centered(self.grid_box, self.grid_n)
    }

    pub fn shape(&self) -> Shape {
        match self.shape_kind {
            ShapeKind::Ball => Shape::GaugeBall {
                radius: self.shape_radius,
            },
            ShapeKind::Cylinder => Shape::Cylinder {
                radius: self.shape_radius,
            },
            ShapeKind::Halfspace => Shape::Halfspace {
                normal: self.shape_normal,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_is_the_default() {
        assert_eq!(RunConfig::parse(DEFAULT_CONFIG).unwrap(), RunConfig::default());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.apply_text("kernel.kind = bump\nkernel.support = 2.5 # comment\nsnapshots = 0, 0.1\ntheta = 0.44\n")
            .unwrap();
        assert_eq!(c.kernel_kind, KernelKind::Bump);
        assert_eq!(c.snapshots, vec![0.0, 0.1]);
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
        assert_eq!(
            RunConfig::parse(&RunConfig::default().to_text()).unwrap(),
            RunConfig::default()
        );
    }

    #[test]
    fn errors_name_the_line() {
        let e = RunConfig::parse("beta = 1.2\nbogus = 3\n").unwrap_err();
        assert!(
            matches!(e, Error::Config(ref m) if m.contains("line 2") && m.contains("bogus")),
            "{e}"
        );
        assert!(RunConfig::parse("beta 1.2").is_err());
        assert!(RunConfig::parse("grid.box = 1,2").is_err());
        assert!(RunConfig::parse("kernel.kind = gauss").is_err());
        assert!(RunConfig::parse("eps = nan").is_err());
    }
}
