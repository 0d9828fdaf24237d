//! Reference solutions, calibration runs, level-set extraction and comparison,
//! file I/O and the command line.

mod ball;
mod calibrate;
pub mod cli;
pub mod config;
mod curve;
mod exact;
pub mod io;
mod profiles;
mod regression;

pub use ball::{validate_gauge_ball, BallReport, BallSetup, BallSnapshot};
pub use calibrate::{calibrate_theta_cylinder, CylinderCalibration, CylinderSetup, MIN_CALIBRATION_SAMPLES};
pub use curve::{extract_zero_levelset, hausdorff_distance, LevelCurve, SlicePlane, HAUSDORFF_TOL};
pub use exact::{exact_ball_curve, exact_horizontal_radius, exact_x3_intercept, extinction_time};
pub use profiles::{extract_profiles, AxisProfile, Profiles};
pub use regression::RegressionFit;

use crate::error::Result;
use crate::kernel::KernelSpec;
use crate::profile::{compute_instanton, InstantonOptions, InstantonProfile, LineKernel, Phase1DGrid};

/// Heat-kernel mobility reported for the reference experiment.
pub const REFERENCE_HEAT_THETA: f64 = 0.56561;

/// Instanton of `kernel` at `beta` on [`Phase1DGrid::for_kernel`].
pub fn instanton_for_kernel(kernel: &KernelSpec, beta: f64) -> Result<(InstantonProfile, LineKernel)> {
    let marg = kernel.marginals();
    let grid = Phase1DGrid::for_kernel(marg.as_ref());
    let line = LineKernel::sample(marg.as_ref(), grid.spacing())?;
    let prof = compute_instanton(&line, beta, grid, InstantonOptions::default())?;
    Ok((prof, line))
}
