use super::{GroupPoint, HorizontalJet};
use crate::error::{Error, Result};

/// Relative threshold on `|∇_H F|` below which a point counts as characteristic.
pub const CHARACTERISTIC_TOL: f64 = 1e-8;

/// Surface `x3 = f(x1, x2)` described through the defining function
/// `F = x3 − f(x1, x2)` (the set `F < 0` lies below the graph).
///
/// Only `f` and its first and second Euclidean derivatives are needed; the
/// horizontal jet of `F` follows from them.
pub struct GraphFunction<'a> {
    pub f: &'a dyn Fn(f64, f64) -> f64,
    /// `(∂1 f, ∂2 f)`.
    pub grad: &'a dyn Fn(f64, f64) -> [f64; 2],
    /// `(∂11 f, ∂12 f, ∂22 f)`.
    pub hess: &'a dyn Fn(f64, f64) -> [f64; 3],
}

impl HorizontalJet for GraphFunction<'_> {
    fn value(&self, x: GroupPoint) -> f64 {
        x.x3 - (self.f)(x.x1, x.x2)
    }

    fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2] {
        let [f1, f2] = (self.grad)(x.x1, x.x2);
        [-f1 - 0.5 * x.x2, -f2 + 0.5 * x.x1]
    }

    fn vertical_derivative(&self, _: GroupPoint) -> f64 {
        1.0
    }

    fn horizontal_hessian(&self, x: GroupPoint) -> [[f64; 2]; 2] {
        let [f11, f12, f22] = (self.hess)(x.x1, x.x2);
        [[-f11, -f12 + 0.5], [-f12 - 0.5, -f22]]
    }
}

/// Horizontal mean curvature of the level set of `F` through `point`,
///
/// `E / |∇_H F|³`, `E = X1X1F (X2F)² − 2 (X1X2)*F X1F X2F + X2X2F (X1F)²`,
///
/// which equals `Δ_H d` for the signed distance `d` to the level set. Fails
/// with [`Error::CharacteristicPoint`] where
/// `|∇_H F| ≤ CHARACTERISTIC_TOL · (1 + |∇F|)`.
pub fn graph_horizontal_laplacian<F: HorizontalJet + ?Sized>(f: &F, point: GroupPoint) -> Result<f64> {
    let [g1, g2] = f.horizontal_gradient(point);
    let norm = g1.hypot(g2);
    let e = f.euclidean_gradient(point);
    let tol = CHARACTERISTIC_TOL * (1.0 + (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt());
    if norm <= tol {
        return Err(Error::CharacteristicPoint { norm, tol });
    }
    let h = f.symmetric_horizontal_hessian(point);
    let big_e = h[0][0] * g2 * g2 - 2.0 * h[0][1] * g1 * g2 + h[1][1] * g1 * g1;
    Ok(big_e / (norm * norm * norm))
}
