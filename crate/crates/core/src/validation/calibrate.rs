use super::RegressionFit;
use crate::engine::{init_levelset_field, interface_radius, smoother_for, step_with, EvolutionParams, Shape};
use crate::error::{Error, Result};
use crate::geometry::{GroupPoint, UniformGrid3};
use crate::kernel::KernelSpec;
use crate::profile::InstantonProfile;

/// Minimum number of samples in the fit window.
pub const MIN_CALIBRATION_SAMPLES: usize = 10;

/// Shrinking-cylinder experiment. The cylinder `{x1² + x2² < ρ²}` is
/// invariant under translation in `x3`, and so is every step of the scheme,
/// so the run uses a thin slab periodic in `x3`. It reproduces a full 3-D grid
/// with the same horizontal spacing exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSetup {
    /// Evolution parameters; `t_end` caps the run.
    pub params: EvolutionParams,
    pub radius: f64,
    /// Horizontal box `[−half_width, half_width]²`.
    pub half_width: f64,
    /// Horizontal node count per axis.
    pub n: usize,
    /// Steps between radius samples.
    pub sample_every: usize,
}

impl CylinderSetup {
    /// About one sample per `0.02 r²` of time.
    pub fn auto_sample_every(radius: f64, dt: f64) -> usize {
        ((0.02 * radius * radius / dt).round() as usize).max(1)
    }

    /// Horizontal grid with `n` nodes per axis, and a 4-node periodic slab in
    /// `x3` whose spacing resolves the vertical support of an analytic kernel.
    pub fn grid(&self) -> Result<UniformGrid3> {
        let h = 2.0 * self.half_width / (self.n - 1) as f64;
        let h3 = match self.params.kernel {
            KernelSpec::Analytic(b) => {
                let v = b.rescaled(self.params.eps).vertical_radius();
                h.min(0.5 * v)
            }
            KernelSpec::Heat { .. } => h,
        };
        UniformGrid3::with_periodic(
            GroupPoint::new(-self.half_width, -self.half_width, 0.0),
            [h, h, h3],
            [self.n, self.n, 4],
            [false, false, true],
        )
    }
}

/// Radius samples of a shrinking cylinder and the fit `r² = r²(0) − 2θ t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderCalibration {
    /// Mobility with time `t = k Δt` after `k` steps.
    pub theta: f64,
    /// Mobility in the scheme's own time `k δ ε²`, i.e. `θ (1 + λ)`. The
    /// relaxation step is an explicit Euler step of length `δ ε²` for
    /// `ε² ∂ₜ m = −m + tanh(β J^ε ∗ m)`, so this is the value to compare with
    /// the quadrature mobility.
    pub theta_effective: f64,
    pub lambda: f64,
    pub fit: RegressionFit,
    /// Every sample `(t, r)`, including those outside the fit window.
    pub radii: Vec<(f64, f64)>,
}

/// Evolves a cylinder and fits `r²(t)` over samples with `r ≥ 4ε`.
pub fn calibrate_theta_cylinder(setup: &CylinderSetup, profile: &InstantonProfile) -> Result<CylinderCalibration> {
    let p = &setup.params;
    p.validate()?;
    if setup.sample_every == 0 {
        return Err(Error::InvalidParameter("sample_every must be positive".into()));
    }
    let grid = setup.grid()?;
    let smoother = smoother_for(p, &grid)?;
    let mut m = init_levelset_field(Shape::Cylinder { radius: setup.radius }, p.eps, profile, &grid)?;
    let floor = 4.0 * p.eps;
    let mut radii = Vec::new();
    for k in 0..=p.steps() {
        if k > 0 {
            m = step_with(&m, p, smoother.as_ref())?;
        }
        if k % setup.sample_every != 0 {
            continue;
        }
        let Some(r) = interface_radius(&m) else { break };
        radii.push((k as f64 * p.dt, r));
        if r < floor {
            break;
        }
    }
    let window: Vec<(f64, f64)> = radii
        .iter()
        .filter(|s| s.1 >= floor)
        .map(|&(t, r)| (t, r * r))
        .collect();
    if window.len() < MIN_CALIBRATION_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_CALIBRATION_SAMPLES,
            got: window.len(),
        });
    }
    let fit = RegressionFit::fit(window)?;
    let theta = -fit.slope / 2.0;
    let lambda = p.lambda();
    Ok(CylinderCalibration {
        theta,
        theta_effective: theta * (1.0 + lambda),
        lambda,
        fit,
        radii,
    })
}
