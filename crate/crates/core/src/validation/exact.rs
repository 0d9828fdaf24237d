use std::f64::consts::FRAC_PI_2;

use super::{LevelCurve, SlicePlane};
use crate::error::{Error, Result};

/// Extinction time `r² / (√12 θ)` of the gauge ball of radius `r`.
pub fn extinction_time(r: f64, theta: f64) -> f64 {
    r * r / (12f64.sqrt() * theta)
}

fn check(r: f64, theta: f64, t: f64) -> Result<()> {
    if !(r > 0.0 && theta > 0.0 && t >= 0.0 && r.is_finite() && theta.is_finite() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "invalid ball parameters r = {r}, theta = {theta}, t = {t}"
        )));
    }
    let extinction = extinction_time(r, theta);
    if t >= extinction {
        return Err(Error::Extinct { t, extinction });
    }
    Ok(())
}

/// `x3 ≥ 0` on the exact surface
/// `ρ⁴ + 12θt ρ² + 16 x3² + 12(θt)² = r⁴` at horizontal radius `ρ`, or `None`
/// beyond its horizontal extent.
fn height(r: f64, s: f64, rho: f64) -> Option<f64> {
    let rho2 = rho * rho;
    let v = r.powi(4) - rho2 * rho2 - 12.0 * s * rho2 - 12.0 * s * s;
    (v >= 0.0).then(|| (v / 16.0).sqrt())
}

/// Horizontal extent `ρ_max` with `ρ⁴ + 12θtρ² + 12(θt)² = r⁴`.
fn rho_max(r: f64, s: f64) -> f64 {
    // positive root of q² + 12 s q + 12 s² − r⁴ in q = ρ²
    let q = -6.0 * s + (24.0 * s * s + r.powi(4)).sqrt();
    q.max(0.0).sqrt()
}

/// `x3`-intercept `√(r⁴ − 12(θt)²) / 4` of the exact surface.
pub fn exact_x3_intercept(r: f64, theta: f64, t: f64) -> Result<f64> {
    check(r, theta, t)?;
    let s = theta * t;
    Ok(height(r, s, 0.0).unwrap_or(0.0))
}

/// Horizontal radius `ρ_max(t)` of the exact surface at `x3 = 0`.
pub fn exact_horizontal_radius(r: f64, theta: f64, t: f64) -> Result<f64> {
    check(r, theta, t)?;
    Ok(rho_max(r, theta * t))
}

/// The `x2 = 0` slice of the exact surface at time `t`, `4 n` points.
/// Points are spaced by `ρ = ρ_max cos φ` with uniform `φ`, which clusters
/// them where the slice turns vertical.
pub fn exact_ball_curve(r: f64, theta: f64, t: f64, n: usize) -> Result<LevelCurve> {
    check(r, theta, t)?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "exact curve needs at least 2 points per quadrant".into(),
        ));
    }
    let s = theta * t;
    let rm = rho_max(r, s);
    let mut pts = Vec::with_capacity(4 * n);
    for k in 0..n {
        let phi = FRAC_PI_2 * k as f64 / n as f64;
        let rho = rm * phi.cos();
        let z = height(r, s, rho).unwrap_or(0.0);
        pts.extend([[rho, z], [-rho, -z]]);
        // mirror without duplicating the axis points
        let phi2 = FRAC_PI_2 * (k as f64 + 0.5) / n as f64;
        let rho2 = rm * phi2.cos();
        let z2 = height(r, s, rho2).unwrap_or(0.0);
        pts.extend([[-rho2, z2], [rho2, -z2]]);
    }
    LevelCurve::from_unordered(SlicePlane::X2Zero, pts)
}
