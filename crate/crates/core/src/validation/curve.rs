use crate::error::{Error, Result};
use crate::geometry::ScalarField;

/// Coordinate slice of a 3-D field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicePlane {
    /// `x2 = 0`, points are `(x1, x3)`.
    X2Zero,
    /// `x3 = 0`, points are `(x1, x2)`.
    X3Zero,
}

/// Closed polygon in a slice, ordered by angle around its centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCurve {
    pub plane: SlicePlane,
    pub points: Vec<[f64; 2]>,
}

impl LevelCurve {
    /// Orders `points` by angle around their centroid.
    pub fn from_unordered(plane: SlicePlane, mut points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidParameter("curve points must be finite".into()));
        }
        let n = points.len() as f64;
        let c = [
            points.iter().map(|p| p[0]).sum::<f64>() / n,
            points.iter().map(|p| p[1]).sum::<f64>() / n,
        ];
        let angle = |p: &[f64; 2]| (p[1] - c[1]).atan2(p[0] - c[0]);
        points.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        Ok(LevelCurve { plane, points })
    }

    fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

/// Values of `field` on the slice, interpolated linearly across the slice
/// axis, with the coordinates of the two in-plane axes.
fn slice_values(field: &ScalarField, plane: SlicePlane) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let g = &field.grid;
    let (cut, a_axis, b_axis) = match plane {
        SlicePlane::X2Zero => (1, 0, 2),
        SlicePlane::X3Zero => (2, 0, 1),
    };
    let f = g.fractional_index(cut, 0.0);
    let lo = f.floor();
    let t = f - lo;
    let lo = lo as isize;
    let ca: Vec<f64> = (0..g.dims[a_axis]).map(|i| g.coord(a_axis, i as isize)).collect();
    let cb: Vec<f64> = (0..g.dims[b_axis]).map(|i| g.coord(b_axis, i as isize)).collect();
    let at = |a: usize, b: usize, c: isize| {
        let mut idx = [0isize; 3];
        idx[a_axis] = a as isize;
        idx[b_axis] = b as isize;
        idx[cut] = c;
        field.at(idx[0], idx[1], idx[2])
    };
    let vals = (0..ca.len())
        .map(|a| {
            (0..cb.len())
                .map(|b| {
                    let v0 = at(a, b, lo);
                    if t == 0.0 {
                        v0
                    } else {
                        v0 + t * (at(a, b, lo + 1) - v0)
                    }
                })
                .collect()
        })
        .collect();
    (ca, cb, vals)
}

/// Zero crossings of `field` on the edges of the slice grid, by linear
/// interpolation, ordered by angle around their centroid.
pub fn extract_zero_levelset(field: &ScalarField, plane: SlicePlane) -> Result<LevelCurve> {
    let (ca, cb, v) = slice_values(field, plane);
    let mut pts = Vec::new();
    let mut cross = |p: [f64; 2], q: [f64; 2], fp: f64, fq: f64| {
        if fp == 0.0 {
            pts.push(p);
        } else if (fp < 0.0) != (fq < 0.0) && fq != 0.0 {
            let s = fp / (fp - fq);
            pts.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    };
    for a in 0..ca.len() {
        for b in 0..cb.len() {
            let p = [ca[a], cb[b]];
            if a + 1 < ca.len() {
                cross(p, [ca[a + 1], cb[b]], v[a][b], v[a + 1][b]);
            }
            if b + 1 < cb.len() {
                cross(p, [ca[a], cb[b + 1]], v[a][b], v[a][b + 1]);
            }
        }
    }
    if pts.is_empty() {
        return Err(Error::NoZeroSet);
    }
    LevelCurve::from_unordered(plane, pts)
}

fn point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2).clamp(0.0, 1.0)
    };
    let (ex, ey) = (p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
    (ex * ex + ey * ey).sqrt()
}

/// Absolute accuracy of [`hausdorff_distance`].
pub const HAUSDORFF_TOL: f64 = 1e-10;

/// `sup_{p ∈ A} dist(p, B)` over the polygons as point sets, by branch and
/// bound on each segment of `A`. On an interval of a segment, the distance to
/// a fixed segment of `B` is convex, so its larger endpoint value bounds it.
fn directed(a: &LevelCurve, b: &LevelCurve) -> f64 {
    let segs: Vec<_> = b.segments().collect();
    let dist_all = |p: [f64; 2]| -> Vec<f64> { segs.iter().map(|s| point_segment(p, s.0, s.1)).collect() };
    let min = |d: &[f64]| d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best: f64 = a.points.iter().map(|&p| min(&dist_all(p))).fold(0.0, f64::max);
    for (p, q) in a.segments() {
        let at = |t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
        let mut stack = vec![(0.0, dist_all(p), 1.0, dist_all(q), 0)];
        while let Some((t0, d0, t1, d1, depth)) = stack.pop() {
            let bound = d0.iter().zip(&d1).map(|(x, y)| x.max(*y)).fold(f64::INFINITY, f64::min);
            if bound <= best + HAUSDORFF_TOL || depth >= 60 {
                continue;
            }
            let tm = 0.5 * (t0 + t1);
            let dm = dist_all(at(tm));
            best = best.max(min(&dm));
            stack.push((t0, d0, tm, dm.clone(), depth + 1));
            stack.push((tm, dm, t1, d1, depth + 1));
        }
    }
    best
}

/// Symmetric Hausdorff distance between two closed polygons, accurate to
/// [`HAUSDORFF_TOL`].
pub fn hausdorff_distance(a: &LevelCurve, b: &LevelCurve) -> Result<f64> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Boundary, UniformGrid3};
    use std::f64::consts::TAU;

    fn circle(r: f64, n: usize, shift: [f64; 2]) -> LevelCurve {
        let pts = (0..n).map(|k| {
            let a = TAU * k as f64 / n as f64;
            [shift[0] + r * a.cos(), shift[1] + r * a.sin()]
        });
        LevelCurve::from_unordered(SlicePlane::X3Zero, pts.collect()).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = circle(1.0, 256, [0.0, 0.0]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let b = circle(1.1, 256, [0.0, 0.0]);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.1).abs() < 1e-3);
        let c = circle(1.0, 256, [0.05, 0.0]);
        assert!((hausdorff_distance(&a, &c).unwrap() - 0.05).abs() < 1e-3);
        let empty = LevelCurve {
            plane: SlicePlane::X3Zero,
            points: vec![],
        };
        assert_eq!(hausdorff_distance(&a, &empty), Err(Error::EmptyCurve));
    }

    #[test]
    fn hausdorff_sees_segment_interiors() {
        // a square against its own vertices: identical sets
        let sq = LevelCurve::from_unordered(
            SlicePlane::X3Zero,
            vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
        )
        .unwrap();
        let single = LevelCurve {
            plane: SlicePlane::X3Zero,
            points: vec![[0.0, 0.0]],
        };
        // the farthest points of the square from its centre are its corners
        assert!((hausdorff_distance(&sq, &single).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        // a point set against a segment whose interior is far from every vertex
        let seg = LevelCurve {
            plane: SlicePlane::X3Zero,
            points: vec![[-1.0, 0.0], [1.0, 0.0]],
        };
        let ends = LevelCurve {
            plane: SlicePlane::X3Zero,
            points: vec![[-1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
        };
        assert!(hausdorff_distance(&seg, &ends).unwrap() < 1e-12);
        let pts = LevelCurve {
            plane: SlicePlane::X3Zero,
            points: vec![[-1.0, 0.0]],
        };
        assert!((hausdorff_distance(&seg, &pts).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn extraction_from_a_sign_field() {
        let g = UniformGrid3::centered([2.0, 2.0, 2.0], [41, 40, 41]).unwrap();
        let f = ScalarField::from_fn(g.clone(), [Boundary::Edge; 3], |x| x.x1 * x.x1 + x.x3 * x.x3 - 1.0).unwrap();
        let c = extract_zero_levelset(&f, SlicePlane::X2Zero).unwrap();
        assert!(c.points.len() > 40);
        for p in &c.points {
            // linear interpolation of a quadratic is within h² of the circle
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 0.01);
        }
        let neg = f.map(|v| -v);
        assert_eq!(extract_zero_levelset(&neg, SlicePlane::X2Zero).unwrap(), c);
        let flat = ScalarField::constant(g, 0.6585);
        assert_eq!(extract_zero_levelset(&flat, SlicePlane::X3Zero), Err(Error::NoZeroSet));
    }
}
