use crate::geometry::{GroupPoint, ScalarField};

/// Summary of one step of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub t: f64,
    pub min: f64,
    pub max: f64,
    /// Interface radius on the positive `x1`-axis at `x2 = x3 = 0`.
    pub radius: Option<f64>,
    /// First zero crossings on the positive and negative `x3`-axis.
    pub x3_upper: Option<f64>,
    pub x3_lower: Option<f64>,
}

impl StepDiagnostics {
    pub fn measure(step: usize, t: f64, m: &ScalarField) -> Self {
        let (x3_upper, x3_lower) = x3_intercepts(m);
        StepDiagnostics {
            step,
            t,
            min: m.min(),
            max: m.max(),
            radius: interface_radius(m),
            x3_upper,
            x3_lower,
        }
    }
}

/// First zero crossing of `m` on the coordinate axis `axis` (other
/// coordinates 0), scanning from `start` towards `end`. Samples are taken at
/// `start` and at every grid node strictly between the two; the crossing is
/// located by linear interpolation between consecutive samples.
pub fn axis_crossing(m: &ScalarField, axis: usize, start: f64, end: f64) -> Option<f64> {
    let g = &m.grid;
    let at = |s: f64| {
        let mut p = [0.0; 3];
        p[axis] = s;
        m.interpolate(GroupPoint::from(p))
    };
    let h = g.spacing[axis];
    let dir = if end >= start { 1.0 } else { -1.0 };
    let f0 = g.fractional_index(axis, start);
    // first node strictly beyond `start` in the scan direction
    let mut k = if dir > 0.0 {
        f0.floor() as isize + 1
    } else {
        f0.ceil() as isize - 1
    };
    let (mut s_prev, mut v_prev) = (start, at(start));
    if v_prev == 0.0 {
        return Some(start);
    }
    loop {
        let s = g.coord(axis, k);
        if (s - end) * dir > 1e-12 * h || k < 0 || k >= g.dims[axis] as isize {
            return None;
        }
        let v = at(s);
        if v == 0.0 {
            return Some(s);
        }
        if (v > 0.0) != (v_prev > 0.0) {
            return Some(s_prev + (s - s_prev) * v_prev / (v_prev - v));
        }
        s_prev = s;
        v_prev = v;
        k += dir as isize;
    }
}

/// Interface radius: first zero crossing along the positive `x1`-axis at `x2 = x3 = 0`.
pub fn interface_radius(m: &ScalarField) -> Option<f64> {
    axis_crossing(m, 0, 0.0, m.grid.upper(0))
}

/// Upper and lower `x3`-axis intercepts of the zero level set.
pub fn x3_intercepts(m: &ScalarField) -> (Option<f64>, Option<f64>) {
    (
        axis_crossing(m, 2, 0.0, m.grid.upper(2)),
        axis_crossing(m, 2, 0.0, m.grid.coord(2, 0)),
    )
}
