use crate::error::{Error, Result};
use crate::geometry::{default_boundary, gauge_norm, Boundary, GroupPoint, ScalarField, UniformGrid3};
use crate::profile::InstantonProfile;

/// Initial interface `{φ = 0}`; the field is negative where `φ < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `φ = ‖x‖_{H¹} − r`.
    GaugeBall { radius: f64 },
    /// `φ = √(x1² + x2²) − ρ`.
    Cylinder { radius: f64 },
    /// `φ = ⟨n, x⟩ / |n|`.
    Halfspace { normal: [f64; 3] },
}

impl Shape {
    pub fn phi(&self, x: GroupPoint) -> f64 {
        match *self {
            Shape::GaugeBall { radius } => gauge_norm(x) - radius,
            Shape::Cylinder { radius } => x.rho2().sqrt() - radius,
            Shape::Halfspace { normal: n } => {
                let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                (n[0] * x.x1 + n[1] * x.x2 + n[2] * x.x3) / len
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::GaugeBall { radius } | Shape::Cylinder { radius } => radius > 0.0 && radius.is_finite(),
            Shape::Halfspace { normal: n } => n.iter().all(|c| c.is_finite()) && n.iter().any(|&c| c != 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid shape {self:?}")))
        }
    }
}

/// `m(x) = m̄(φ(x)/ε)`. The far field is `+m_β` outside a ball or cylinder;
/// other unbounded directions replicate edge values (or wrap on periodic axes).
pub fn init_levelset_field(
    shape: Shape,
    eps: f64,
    profile: &InstantonProfile,
    grid: &UniformGrid3,
) -> Result<ScalarField> {
    shape.validate()?;
    let spacing = grid.max_horizontal_spacing();
    if !(eps >= 2.0 * spacing) {
        return Err(Error::ResolutionTooCoarse { eps, spacing });
    }
    let mb = profile.m_beta;
    let boundary = match shape {
        Shape::GaugeBall { .. } => default_boundary(grid, Some(mb)),
        Shape::Cylinder { .. } => {
            let mut b = default_boundary(grid, Some(mb));
            if !grid.periodic[2] {
                b[2] = Boundary::Edge;
            }
            b
        }
        Shape::Halfspace { .. } => default_boundary(grid, None),
    };
    ScalarField::from_fn(grid.clone(), boundary, |x| profile.eval(shape.phi(x) / eps))
}
