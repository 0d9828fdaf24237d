use crate::error::{Error, Result};
use crate::geometry::{monotone_sub_laplacian_values, ScalarField, UniformGrid3};

/// Safety factor applied to the monotonicity limit of an explicit substep.
const SAFETY: f64 = 0.9;

/// Largest explicit substep keeping the heat update monotone:
/// `0.9 / (2/h1² + 2/h2²)`.
pub fn heat_stability_bound(grid: &UniformGrid3) -> f64 {
    let [h1, h2, _] = grid.spacing;
    SAFETY / (2.0 / (h1 * h1) + 2.0 / (h2 * h2))
}

/// Smallest number of stable substeps covering time `tau`.
pub fn heat_substeps(grid: &UniformGrid3, tau: f64) -> usize {
    ((tau / heat_stability_bound(grid)).ceil() as usize).max(1)
}

/// Approximates `e^{τΔ_H} m` with `substeps` explicit monotone steps
/// (`None` selects [`heat_substeps`]).
pub fn heat_semigroup(m: &ScalarField, tau: f64, substeps: Option<usize>) -> Result<ScalarField> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusion time must be nonnegative, got {tau}"
        )));
    }
    let n = substeps.unwrap_or_else(|| heat_substeps(&m.grid, tau));
    if n == 0 {
        return Err(Error::InvalidParameter(
            "heat semigroup needs at least one substep".into(),
        ));
    }
    let dt = tau / n as f64;
    let bound = heat_stability_bound(&m.grid);
    if dt > bound {
        return Err(Error::StabilityViolation { dt, bound });
    }
    let mut u = m.clone();
    if tau == 0.0 {
        return Ok(u);
    }
    for _ in 0..n {
        u.values = monotone_sub_laplacian_values(&u, dt, true);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Boundary, GroupPoint};

    fn grid() -> UniformGrid3 {
        UniformGrid3::centered([2.0, 2.0, 1.0], [21, 21, 11]).unwrap()
    }

    #[test]
    fn constants_are_fixed() {
        let f = ScalarField::constant(grid(), -0.6);
        let u = heat_semigroup(&f, 0.05, None).unwrap();
        assert!(u.values.iter().all(|v| (v + 0.6).abs() < 1e-14));
    }

    #[test]
    fn rejects_unstable_substeps() {
        let f = ScalarField::constant(grid(), 0.0);
        let bound = heat_stability_bound(&f.grid);
        let err = heat_semigroup(&f, 10.0 * bound, Some(2)).unwrap_err();
        assert!(matches!(err, Error::StabilityViolation { .. }));
        assert!(heat_semigroup(&f, 10.0 * bound, Some(10)).is_ok());
        assert_eq!(heat_substeps(&f.grid, 10.0 * bound), 10);
    }

    #[test]
    fn maximum_principle_and_mass() {
        let g = grid();
        let f = ScalarField::from_fn(g, [Boundary::FarField { low: 0.0, high: 0.0 }; 3], |p| {
            let r = p.x1 * p.x1 + p.x2 * p.x2 + 4.0 * p.x3.abs();
            if r < 0.5 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let u = heat_semigroup(&f, 0.02, None).unwrap();
        assert!(u.min() >= -1e-15 && u.max() <= 1.0 + 1e-15);
        assert!((u.sum() - f.sum()).abs() < 1e-10 * f.sum());
    }

    #[test]
    fn quadratic_grows_linearly() {
        // e^{tΔ_H}(x1² + x2²) = x1² + x2² + 4t
        let g = UniformGrid3::centered([1.0, 1.0, 0.5], [21, 21, 11]).unwrap();
        let f = ScalarField::from_fn(g, [Boundary::Edge; 3], |p: GroupPoint| p.rho2()).unwrap();
        let u = heat_semigroup(&f, 0.01, None).unwrap();
        for i in 5..16 {
            for j in 5..16 {
                assert!((u.get(i, j, 5) - f.get(i, j, 5) - 0.04).abs() < 1e-12);
            }
        }
    }
}
