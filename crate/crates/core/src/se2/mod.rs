//! The roto-translation group SE(2) = ℝ² × S¹ with frame `Y₁ = (cos θ, sin θ, 0)`,
//! `Y₂ = ∂_θ`, `Y₃ = [Y₁, Y₂]`, its canonical coordinates around a point, local
//! dilations, and evolution runs on grids periodic in `θ`.

mod evolve;

pub use evolve::{
    init_lifted_disk, projected_area, se2_evolve, se2_grid, se2_sub_laplacian, Se2AlgebraSmoother, Se2HeatSmoother,
};

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::GroupPoint;

/// Width of the band `0 < |a₂| ≤ TOL_A2` where [`se2_exp`] uses a Taylor series.
pub const TOL_A2: f64 = 1e-6;

/// A point `(x1, x2, θ)` with `θ` reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SE2Point {
    pub x1: f64,
    pub x2: f64,
    pub theta: f64,
}

impl SE2Point {
    pub fn new(x1: f64, x2: f64, theta: f64) -> Self {
        SE2Point {
            x1,
            x2,
            theta: reduce_angle(theta),
        }
    }

    /// Group law `(x, θ)·(y, φ) = (x + R_θ y, θ + φ)`.
    pub fn compose(self, o: SE2Point) -> SE2Point {
        let (s, c) = self.theta.sin_cos();
        SE2Point::new(
            self.x1 + c * o.x1 - s * o.x2,
            self.x2 + s * o.x1 + c * o.x2,
            self.theta + o.theta,
        )
    }

    pub fn inverse(self) -> SE2Point {
        let (s, c) = self.theta.sin_cos();
        SE2Point::new(-(c * self.x1 + s * self.x2), s * self.x1 - c * self.x2, -self.theta)
    }

    /// Planar distance plus angular distance on the circle.
    pub fn distance(self, o: SE2Point) -> f64 {
        let d = wrap_angle(o.theta - self.theta).abs();
        ((self.x1 - o.x1).powi(2) + (self.x2 - o.x2).powi(2) + d * d).sqrt()
    }
}

fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Representative of `t` in `[−π, π)`.
fn wrap_angle(t: f64) -> f64 {
    (t + PI).rem_euclid(TAU) - PI
}

/// Coordinates `a` of the algebra element `a₁Y₁ + a₂Y₂ + a₃Y₃`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraCoords {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AlgebraCoords {
    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        AlgebraCoords { a1, a2, a3 }
    }

    /// `δ_λ(a) = (λ a₁, λ a₂, λ² a₃)`.
    pub fn dilate(self, lambda: f64) -> Self {
        AlgebraCoords::new(lambda * self.a1, lambda * self.a2, lambda * lambda * self.a3)
    }

    pub fn norm(self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }
}

impl From<GroupPoint> for AlgebraCoords {
    fn from(p: GroupPoint) -> Self {
        AlgebraCoords::new(p.x1, p.x2, p.x3)
    }
}

impl From<AlgebraCoords> for GroupPoint {
    fn from(a: AlgebraCoords) -> Self {
        GroupPoint::new(a.a1, a.a2, a.a3)
    }
}

/// Columns `Y₁, Y₂, Y₃` at `p` in the coordinates `(x1, x2, θ)`.
pub fn se2_frame(p: SE2Point) -> [[f64; 3]; 3] {
    let (s, c) = p.theta.sin_cos();
    [[c, s, 0.0], [0.0, 0.0, 1.0], [s, -c, 0.0]]
}

/// `E(a₂) = ∫₀¹ e^{i a₂ t} dt` as `(re, im)`.
fn flow_factor(a2: f64) -> (f64, f64) {
    if a2 == 0.0 {
        return (1.0, 0.0);
    }
    if a2.abs() <= TOL_A2 {
        // Σ_{k<6} (i a₂)^k / (k+1)!
        let a = a2;
        let a2p = a * a;
        return (
            1.0 - a2p / 6.0 + a2p * a2p / 120.0,
            a / 2.0 - a * a2p / 24.0 + a * a2p * a2p / 720.0,
        );
    }
    let h = 0.5 * a2;
    // 1 − cos a = 2 sin²(a/2) avoids cancellation for small a
    (a2.sin() / a2, 2.0 * h.sin() * h.sin() / a2)
}

/// Time-one flow of `a₁Y₁ + a₂Y₂ + a₃Y₃` from `x0`. Along the flow
/// `θ(t) = θ₀ + a₂ t` and `ż = (a₁ − i a₃) e^{iθ}` for `z = x1 + i x2`.
pub fn se2_exp(x0: SE2Point, a: AlgebraCoords) -> SE2Point {
    let (er, ei) = flow_factor(a.a2);
    let (s, c) = x0.theta.sin_cos();
    // (a₁ − i a₃) e^{iθ₀} E(a₂)
    let (pr, pi) = (a.a1 * c + a.a3 * s, a.a1 * s - a.a3 * c);
    SE2Point::new(x0.x1 + pr * er - pi * ei, x0.x2 + pr * ei + pi * er, x0.theta + a.a2)
}

/// Canonical coordinates of `y` around `x0`, the inverse of [`se2_exp`] for
/// `|Δθ| < π`.
pub fn se2_log(x0: SE2Point, y: SE2Point) -> Result<AlgebraCoords> {
    let a2 = wrap_angle(y.theta - x0.theta);
    if a2.abs() >= PI {
        return Err(Error::OutsideChart(a2.abs()));
    }
    let (er, ei) = flow_factor(a2);
    let (s, c) = x0.theta.sin_cos();
    let (dx, dy) = (y.x1 - x0.x1, y.x2 - x0.x2);
    // rotate back by θ₀, then divide by E(a₂)
    let (qr, qi) = (c * dx + s * dy, -s * dx + c * dy);
    let d = er * er + ei * ei;
    let (ur, ui) = ((qr * er + qi * ei) / d, (qi * er - qr * ei) / d);
    Ok(AlgebraCoords::new(ur, a2, -ui))
}

/// `δ_{λ,x0}(y) = exp_{x0} δ_λ log_{x0}(y)`.
pub fn se2_local_dilate(x0: SE2Point, lambda: f64, y: SE2Point) -> Result<SE2Point> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dilation factor must be nonnegative, got {lambda}"
        )));
    }
    Ok(se2_exp(x0, se2_log(x0, y)?.dilate(lambda)))
}

/// `log_{x0}(exp_{exp_{x0}(a)}(b))`, the coordinates of two successive flows.
/// To second order in the weights `(1, 1, 2)` this is the Heisenberg product
/// of `a` and `b`.
pub fn se2_compose_coords(x0: SE2Point, a: AlgebraCoords, b: AlgebraCoords) -> Result<AlgebraCoords> {
    se2_log(x0, se2_exp(se2_exp(x0, a), b))
}
