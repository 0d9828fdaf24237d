//! The two-step scheme for the mean-field dynamics on a 3-D grid:
//!
//! 1. smooth: `v = J^ε * m`, either by group convolution with an analytic
//!    kernel or by running the sub-Laplacian heat equation for time `ε²`;
//! 2. relax: `m ← (1 − δ) m + δ tanh(β v + a)`, `δ = λ/(1 + λ)`, `λ = Δt/ε²`.
//!
//! Both steps are monotone, so the scheme preserves order between solutions.

mod diagnostics;
mod init;

pub use diagnostics::{axis_crossing, interface_radius, x3_intercepts, StepDiagnostics};
pub use init::{init_levelset_field, Shape};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, ScalarField, UniformGrid3};
use crate::kernel::{heat_semigroup, rescale_kernel, ConvolutionPlan, KernelSpec};
use crate::profile::equilibria;

/// Parameters of a run. `kernel` is the unscaled kernel; `J^ε` is derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub beta: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Constant forcing `a` inside the nonlinearity, `tanh(β v + a)`.
    pub forcing: f64,
    pub kernel: KernelSpec,
}

impl EvolutionParams {
    pub fn new(beta: f64, eps: f64, dt: f64, t_end: f64, kernel: KernelSpec) -> Result<Self> {
        let p = EvolutionParams {
            beta,
            eps,
            dt,
            t_end,
            forcing: 0.0,
            kernel,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_forcing(mut self, a: f64) -> Self {
        self.forcing = a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(self.beta > 1.0 && self.beta.is_finite()) {
            return bad(format!("beta must exceed 1, got {}", self.beta));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.lambda() >= 1.0 {
            return bad(format!("dt/eps^2 = {} must stay below 1", self.lambda()));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be nonnegative, got {}", self.t_end));
        }
        if !self.forcing.is_finite() {
            return bad("forcing must be finite".into());
        }
        Ok(())
    }

    /// `λ = Δt / ε²`.
    pub fn lambda(&self) -> f64 {
        self.dt / (self.eps * self.eps)
    }

    /// Interpolation weight `δ = λ / (1 + λ)`.
    pub fn delta(&self) -> f64 {
        let l = self.lambda();
        l / (1.0 + l)
    }

    /// Number of steps needed to reach `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    /// Positive stable constant state `m_β` of the unforced equation.
    pub fn m_beta(&self) -> Result<f64> {
        Ok(equilibria(self.beta, 0.0)?.m_plus)
    }
}

/// Step 1 of the scheme.
pub trait Smoother: Sync {
    fn smooth(&self, m: &ScalarField) -> Result<ScalarField>;
}

/// Heat semigroup for time `tau` with a fixed substep count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatSmoother {
    pub tau: f64,
    pub substeps: Option<usize>,
}

impl Smoother for HeatSmoother {
    fn smooth(&self, m: &ScalarField) -> Result<ScalarField> {
        heat_semigroup(m, self.tau, self.substeps)
    }
}

impl Smoother for ConvolutionPlan {
    fn smooth(&self, m: &ScalarField) -> Result<ScalarField> {
        self.apply(m)
    }
}

/// The smoother for `J^ε` on `grid`.
pub fn smoother_for(params: &EvolutionParams, grid: &UniformGrid3) -> Result<Box<dyn Smoother>> {
    Ok(match rescale_kernel(&params.kernel, params.eps)? {
        KernelSpec::Analytic(b) => Box::new(ConvolutionPlan::new(&b, grid)?),
        KernelSpec::Heat { tau, substeps } => Box::new(HeatSmoother { tau, substeps }),
    })
}

/// `(1 − δ) m + δ tanh(β v + a)`, also applied to far-field constants.
fn relax(m: &ScalarField, v: &ScalarField, p: &EvolutionParams) -> ScalarField {
    let (d, b, a) = (p.delta(), p.beta, p.forcing);
    let upd = |mi: f64, vi: f64| (1.0 - d) * mi + d * (b * vi + a).tanh();
    let values: Vec<f64> = m
        .values
        .par_iter()
        .zip(&v.values)
        .map(|(&mi, &vi)| upd(mi, vi))
        .collect();
    let mut out = m.with_values(values);
    for (bo, bv) in out.boundary.iter_mut().zip(&v.boundary) {
        if let (Boundary::FarField { low, high }, Boundary::FarField { low: vl, high: vh }) = (*bo, *bv) {
            *bo = Boundary::FarField {
                low: upd(low, vl),
                high: upd(high, vh),
            };
        }
    }
    out
}

/// One step with a prepared smoother.
pub fn step_with(m: &ScalarField, p: &EvolutionParams, smoother: &dyn Smoother) -> Result<ScalarField> {
    let v = smoother.smooth(m)?;
    Ok(relax(m, &v, p))
}

/// One step of the scheme; builds the smoother for the field's grid.
pub fn step(m: &ScalarField, p: &EvolutionParams) -> Result<ScalarField> {
    p.validate()?;
    step_with(m, p, smoother_for(p, &m.grid)?.as_ref())
}

/// Snapshots and per-step diagnostics of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<ScalarField>,
    /// One entry per step, including the initial state.
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&ScalarField> {
        self.snapshots.last()
    }
}

/// Converts snapshot times to step indices; each must be a multiple of `dt` in `[0, t_end]`.
fn snapshot_steps(p: &EvolutionParams, times: &[f64]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let k = t / p.dt;
        let kr = k.round();
        if !(t >= 0.0) || (k - kr).abs() > 1e-6 * kr.max(1.0) || t > p.t_end * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "snapshot time {t} is not a multiple of dt = {} within [0, {}]",
                p.dt, p.t_end
            )));
        }
        if let Some(&prev) = out.last() {
            if kr as usize <= prev {
                return Err(Error::InvalidParameter(
                    "snapshot times must be strictly increasing".into(),
                ));
            }
        }
        out.push(kr as usize);
    }
    Ok(out)
}

/// Runs the scheme to `t_end`, keeping the fields at `snapshot_times`.
pub fn evolve(m0: &ScalarField, p: &EvolutionParams, snapshot_times: &[f64]) -> Result<Trajectory> {
    p.validate()?;
    let smoother = smoother_for(p, &m0.grid)?;
    evolve_with(m0, p, smoother.as_ref(), snapshot_times, |_, _| Ok(()))
}

/// Collects snapshots at the requested steps and diagnostics at every step.
struct Recorder<'a> {
    steps: &'a [usize],
    next: usize,
    dt: f64,
    traj: Trajectory,
}

impl<'a> Recorder<'a> {
    fn new(steps: &'a [usize], dt: f64) -> Self {
        Recorder {
            steps,
            next: 0,
            dt,
            traj: Trajectory {
                times: Vec::new(),
                snapshots: Vec::new(),
                diagnostics: Vec::new(),
            },
        }
    }

    fn record(&mut self, k: usize, m: &ScalarField) {
        self.traj
            .diagnostics
            .push(StepDiagnostics::measure(k, k as f64 * self.dt, m));
        if self.steps.get(self.next) == Some(&k) {
            self.next += 1;
            self.traj.times.push(k as f64 * self.dt);
            self.traj.snapshots.push(m.clone());
        }
    }
}

/// [`evolve`] with a prepared smoother and a per-step hook `(step, field)`.
pub fn evolve_with(
    m0: &ScalarField,
    p: &EvolutionParams,
    smoother: &dyn Smoother,
    snapshot_times: &[f64],
    mut hook: impl FnMut(usize, &ScalarField) -> Result<()>,
) -> Result<Trajectory> {
    let steps = snapshot_steps(p, snapshot_times)?;
    let mut rec = Recorder::new(&steps, p.dt);
    let mut m = m0.clone();
    for k in 0..=p.steps() {
        if k > 0 {
            m = step_with(&m, p, smoother)?;
        }
        hook(k, &m)?;
        rec.record(k, &m);
    }
    Ok(rec.traj)
}

/// Unforced run bracketed by runs with forcing `∓ delta_force · ε`.
#[derive(Debug, Clone)]
pub struct ForcingBracket {
    pub lower: Trajectory,
    pub unforced: Trajectory,
    pub upper: Trajectory,
}

/// Evolves the three runs in lockstep and checks `lower ≤ unforced ≤ upper`
/// pointwise after every step.
pub fn forcing_bracket(
    m0: &ScalarField,
    p: &EvolutionParams,
    delta_force: f64,
    snapshot_times: &[f64],
) -> Result<ForcingBracket> {
    p.validate()?;
    if !(delta_force >= 0.0 && delta_force.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta_force must be nonnegative, got {delta_force}"
        )));
    }
    let a = delta_force * p.eps;
    // beyond the threshold the bistable structure the bracket relies on is gone
    equilibria(p.beta, p.forcing + a)?;
    equilibria(p.beta, p.forcing - a)?;
    let smoother = smoother_for(p, &m0.grid)?;
    let params = [
        EvolutionParams {
            forcing: p.forcing - a,
            ..*p
        },
        *p,
        EvolutionParams {
            forcing: p.forcing + a,
            ..*p
        },
    ];
    let steps = snapshot_steps(p, snapshot_times)?;
    let mut recs = [
        Recorder::new(&steps, p.dt),
        Recorder::new(&steps, p.dt),
        Recorder::new(&steps, p.dt),
    ];
    let mut fields = [m0.clone(), m0.clone(), m0.clone()];
    for k in 0..=p.steps() {
        if k > 0 {
            for (f, q) in fields.iter_mut().zip(&params) {
                *f = step_with(f, q, smoother.as_ref())?;
            }
        }
        let [lo, mid, hi] = &fields;
        let gap = lo
            .values
            .iter()
            .zip(&mid.values)
            .zip(&hi.values)
            .map(|((l, u), h)| (u - l).min(h - u))
            .fold(f64::INFINITY, f64::min);
        if gap < -1e-12 {
            return Err(Error::BracketViolated(gap, k));
        }
        for (r, f) in recs.iter_mut().zip(&fields) {
            r.record(k, f);
        }
    }
    let [lower, unforced, upper] = recs.map(|r| r.traj);
    Ok(ForcingBracket { lower, unforced, upper })
}
