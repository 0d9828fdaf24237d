//! The first Heisenberg group H¹: exact group arithmetic, structured grids,
//! and finite-difference realizations of the left-invariant operators.
//!
//! Points are `(x1, x2, x3)` with law
//! `x∘y = (x1+y1, x2+y2, x3+y3 + (x1 y2 − x2 y1)/2)`, identity `0`,
//! inverse `−x`, and anisotropic dilations `δ_λ(x) = (λx1, λx2, λ²x3)`.

mod graph;
mod grid;
mod stencil;
mod taylor;

pub use graph::{graph_horizontal_laplacian, GraphFunction, CHARACTERISTIC_TOL};
pub(crate) use grid::default_boundary;
pub use grid::{Axis, Boundary, ScalarField, UniformGrid3};
pub(crate) use stencil::monotone_sub_laplacian_values;
pub use stencil::{apply_x, horizontal_laplacian, monotone_sub_laplacian, VectorField};
pub use taylor::{taylor_residual, HorizontalJet};

use std::ops::{Add, Mul, Neg, Sub};

/// A point of H¹ with horizontal coordinates `x1`, `x2` and vertical `x3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        GroupPoint { x1, x2, x3 }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Squared horizontal radius `x1² + x2²`.
    pub fn rho2(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl From<[f64; 3]> for GroupPoint {
    fn from(a: [f64; 3]) -> Self {
        GroupPoint::new(a[0], a[1], a[2])
    }
}

// Componentwise (Euclidean) arithmetic, used for coordinates and tests only.
impl Add for GroupPoint {
    type Output = GroupPoint;
    fn add(self, o: GroupPoint) -> GroupPoint {
        GroupPoint::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for GroupPoint {
    type Output = GroupPoint;
    fn sub(self, o: GroupPoint) -> GroupPoint {
        GroupPoint::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for GroupPoint {
    type Output = GroupPoint;
    fn neg(self) -> GroupPoint {
        GroupPoint::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<GroupPoint> for f64 {
    type Output = GroupPoint;
    fn mul(self, p: GroupPoint) -> GroupPoint {
        GroupPoint::new(self * p.x1, self * p.x2, self * p.x3)
    }
}

/// Group law `x∘y`.
pub fn group_mul(x: GroupPoint, y: GroupPoint) -> GroupPoint {
    GroupPoint {
        x1: x.x1 + y.x1,
        x2: x.x2 + y.x2,
        x3: x.x3 + y.x3 + 0.5 * (x.x1 * y.x2 - x.x2 * y.x1),
    }
}

/// Group inverse, `x⁻¹ = −x`.
pub fn group_inv(x: GroupPoint) -> GroupPoint {
    -x
}

/// Anisotropic dilation `δ_λ`.
pub fn dilate(lambda: f64, x: GroupPoint) -> GroupPoint {
    debug_assert!(lambda >= 0.0, "dilation factor must be nonnegative");
    GroupPoint::new(lambda * x.x1, lambda * x.x2, lambda * lambda * x.x3)
}

/// Homogeneous gauge `((x1²+x2²)² + 16 x3²)^{1/4}`.
pub fn gauge_norm(x: GroupPoint) -> f64 {
    let r2 = x.rho2();
    (r2 * r2 + 16.0 * x.x3 * x.x3).sqrt().sqrt()
}
