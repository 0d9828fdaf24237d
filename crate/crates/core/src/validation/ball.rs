use super::{exact_ball_curve, exact_x3_intercept, extinction_time, extract_zero_levelset, hausdorff_distance};
use super::{LevelCurve, SlicePlane};
use crate::engine::{evolve, init_levelset_field, x3_intercepts, EvolutionParams, Shape, Trajectory};
use crate::error::Result;
use crate::geometry::UniformGrid3;
use crate::profile::InstantonProfile;

/// Points per quadrant of the exact reference curve.
const EXACT_POINTS: usize = 256;

/// Gauge-ball run compared with the exact solution for mobility `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSetup {
    pub params: EvolutionParams,
    pub radius: f64,
    pub theta: f64,
    pub grid: UniformGrid3,
    /// Snapshot times, each below the extinction time.
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallSnapshot {
    pub t: f64,
    pub hausdorff: f64,
    /// Upper `x3`-axis intercept of the computed zero level set.
    pub x3_intercept: Option<f64>,
    pub exact_x3_intercept: f64,
    pub curve: LevelCurve,
    pub exact: LevelCurve,
}

#[derive(Debug, Clone)]
pub struct BallReport {
    pub extinction_time: f64,
    pub snapshots: Vec<BallSnapshot>,
    /// Whether the computed `x3` intercepts decrease strictly across snapshots.
    pub intercepts_decreasing: bool,
    pub trajectory: Trajectory,
}

impl BallReport {
    /// Largest Hausdorff distance over snapshots with `t ≤ fraction · t*`.
    pub fn max_hausdorff_until(&self, fraction: f64) -> f64 {
        self.snapshots
            .iter()
            .filter(|s| s.t <= fraction * self.extinction_time)
            .map(|s| s.hausdorff)
            .fold(0.0, f64::max)
    }
}

/// Evolves the gauge ball and compares the `x2 = 0` zero level sets with the
/// exact shrinking ball.
pub fn validate_gauge_ball(setup: &BallSetup, profile: &InstantonProfile) -> Result<BallReport> {
    let p = &setup.params;
    for &t in &setup.snapshot_times {
        exact_x3_intercept(setup.radius, setup.theta, t)?;
    }
    let m0 = init_levelset_field(Shape::GaugeBall { radius: setup.radius }, p.eps, profile, &setup.grid)?;
    let trajectory = evolve(&m0, p, &setup.snapshot_times)?;
    let mut snapshots = Vec::with_capacity(trajectory.snapshots.len());
    for (&t, m) in trajectory.times.iter().zip(&trajectory.snapshots) {
        let curve = extract_zero_levelset(m, SlicePlane::X2Zero)?;
        let exact = exact_ball_curve(setup.radius, setup.theta, t, EXACT_POINTS)?;
        snapshots.push(BallSnapshot {
            t,
            hausdorff: hausdorff_distance(&curve, &exact)?,
            x3_intercept: x3_intercepts(m).0,
            exact_x3_intercept: exact_x3_intercept(setup.radius, setup.theta, t)?,
            curve,
            exact,
        });
    }
    let intercepts_decreasing = snapshots
        .windows(2)
        .all(|w| match (w[0].x3_intercept, w[1].x3_intercept) {
            (Some(a), Some(b)) => b < a,
            _ => false,
        });
    Ok(BallReport {
        extinction_time: extinction_time(setup.radius, setup.theta),
        snapshots,
        intercepts_decreasing,
        trajectory,
    })
}
