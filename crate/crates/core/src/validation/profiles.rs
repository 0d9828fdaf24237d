use crate::engine::axis_crossing;
use crate::geometry::{GroupPoint, ScalarField};

/// Samples `(s, m)` along a coordinate axis, `s` measured from the zero crossing.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisProfile {
    /// Position of the zero crossing on the positive half-axis, if any.
    pub crossing: Option<f64>,
    pub samples: Vec<(f64, f64)>,
}

impl AxisProfile {
    /// Largest `|Δm / Δs|` between consecutive samples.
    pub fn max_slope(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }
}

/// Profiles of a field through the origin along the `x1`- and `x3`-axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    pub t: f64,
    pub x1: AxisProfile,
    pub x3: AxisProfile,
}

fn axis_profile(m: &ScalarField, axis: usize) -> AxisProfile {
    let g = &m.grid;
    let crossing = axis_crossing(m, axis, 0.0, g.upper(axis));
    let c = crossing.unwrap_or(0.0);
    let first = g.fractional_index(axis, 0.0).floor() as isize + 1;
    let nodes = std::iter::once(0.0).chain(
        (first..g.dims[axis] as isize)
            .map(|k| g.coord(axis, k))
            .filter(|&s| s > 0.0),
    );
    let samples = nodes
        .map(|s| {
            let mut p = [0.0; 3];
            p[axis] = s;
            (s - c, m.interpolate(GroupPoint::from(p)))
        })
        .collect();
    AxisProfile { crossing, samples }
}

/// `m(t, x1, 0, 0)` and `m(t, 0, 0, x3)` on the positive half-axes, each
/// recentred at its zero crossing.
pub fn extract_profiles(m: &ScalarField, t: f64) -> Profiles {
    Profiles {
        t,
        x1: axis_profile(m, 0),
        x3: axis_profile(m, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Boundary, UniformGrid3};

    #[test]
    fn profiles_of_an_anisotropic_front() {
        let g = UniformGrid3::centered([2.0, 2.0, 1.0], [41, 41, 41]).unwrap();
        let m = ScalarField::from_fn(g, [Boundary::Edge; 3], |x| {
            (((x.x1 * x.x1 + x.x2 * x.x2).powi(2) + 16.0 * x.x3 * x.x3).sqrt().sqrt() - 1.0).tanh()
        })
        .unwrap();
        let p = extract_profiles(&m, 0.0);
        assert!((p.x1.crossing.unwrap() - 1.0).abs() < 1e-3);
        assert!((p.x3.crossing.unwrap() - 0.25).abs() < 1e-2);
        for prof in [&p.x1, &p.x3] {
            assert!(prof.samples.windows(2).all(|w| w[1].1 >= w[0].1));
            assert!(prof.samples.iter().any(|s| s.0 < 0.0) && prof.samples.iter().any(|s| s.0 > 0.0));
        }
        // the gauge grows like 2√|x3| near the x3 crossing, so that profile is steeper
        assert!(p.x3.max_slope() > 2.0 * p.x1.max_slope());
    }
}
