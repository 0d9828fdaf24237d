use super::GroupPoint;
use crate::error::{Error, Result};

/// Coordinate axis of a 3-D grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1 = 0,
    X2 = 1,
    X3 = 2,
}

/// How out-of-range indices along one axis are resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Ghost cells take the constant value `low` below the grid and `high` above it.
    FarField { low: f64, high: f64 },
    /// Ghost cells repeat the nearest edge value.
    Edge,
    /// Indices wrap around; only valid on axes the grid declares periodic.
    Periodic,
}

/// Uniform tensor grid `origin + (i h1, j h2, k h3)`, `0 ≤ i < n1` etc.
///
/// A periodic axis has period `n·h`, so the last node is one spacing short of
/// the first node's image.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid3 {
    pub origin: GroupPoint,
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    pub periodic: [bool; 3],
}

impl UniformGrid3 {
    pub fn new(origin: GroupPoint, spacing: [f64; 3], dims: [usize; 3]) -> Result<Self> {
        Self::with_periodic(origin, spacing, dims, [false; 3])
    }

    pub fn with_periodic(origin: GroupPoint, spacing: [f64; 3], dims: [usize; 3], periodic: [bool; 3]) -> Result<Self> {
        for a in 0..3 {
            if !(spacing[a] > 0.0 && spacing[a].is_finite()) {
                return Err(Error::InvalidGrid(format!(
                    "spacing along axis {} must be positive",
                    a + 1
                )));
            }
            if dims[a] < 3 {
                return Err(Error::InvalidGrid(format!("axis {} needs at least 3 nodes", a + 1)));
            }
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(UniformGrid3 {
            origin,
            spacing,
            dims,
            periodic,
        })
    }

    /// Node-centred box `[-half[a], half[a]]` on every axis.
    pub fn centered(half: [f64; 3], dims: [usize; 3]) -> Result<Self> {
        let mut spacing = [0.0; 3];
        for a in 0..3 {
            if dims[a] < 3 {
                return Err(Error::InvalidGrid(format!("axis {} needs at least 3 nodes", a + 1)));
            }
            spacing[a] = 2.0 * half[a] / (dims[a] - 1) as f64;
        }
        Self::new(GroupPoint::new(-half[0], -half[1], -half[2]), spacing, dims)
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn coord(&self, axis: usize, i: isize) -> f64 {
        let o = match axis {
            0 => self.origin.x1,
            1 => self.origin.x2,
            _ => self.origin.x3,
        };
        o + i as f64 * self.spacing[axis]
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> GroupPoint {
        GroupPoint::new(
            self.coord(0, i as isize),
            self.coord(1, j as isize),
            self.coord(2, k as isize),
        )
    }

    /// Fractional index of coordinate `x` along `axis`.
    #[inline]
    pub fn fractional_index(&self, axis: usize, x: f64) -> f64 {
        (x - self.coord(axis, 0)) / self.spacing[axis]
    }

    /// Upper coordinate of the last node along `axis`.
    pub fn upper(&self, axis: usize) -> f64 {
        self.coord(axis, self.dims[axis] as isize - 1)
    }

    pub fn max_horizontal_spacing(&self) -> f64 {
        self.spacing[0].max(self.spacing[1])
    }

    /// Maximum of `x1² + x2²` over the grid nodes.
    pub fn max_rho2(&self) -> f64 {
        let m1 = self.coord(0, 0).abs().max(self.upper(0).abs());
        let m2 = self.coord(1, 0).abs().max(self.upper(1).abs());
        m1 * m1 + m2 * m2
    }
}

/// Nodal values on a [`UniformGrid3`], row-major with axis 3 fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: UniformGrid3,
    pub values: Vec<f64>,
    pub boundary: [Boundary; 3],
}

impl ScalarField {
    pub fn new(grid: UniformGrid3, values: Vec<f64>, boundary: [Boundary; 3]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        for a in 0..3 {
            let is_periodic = matches!(boundary[a], Boundary::Periodic);
            if is_periodic != grid.periodic[a] {
                return Err(Error::InvalidGrid(format!(
                    "axis {} boundary does not match the grid's periodicity",
                    a + 1
                )));
            }
        }
        Ok(ScalarField { grid, values, boundary })
    }

    /// Constant field; clamped axes use the constant as far field.
    pub fn constant(grid: UniformGrid3, c: f64) -> Self {
        let boundary = default_boundary(&grid, Some(c));
        ScalarField {
            values: vec![c; grid.len()],
            grid,
            boundary,
        }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: UniformGrid3, boundary: [Boundary; 3], f: impl Fn(GroupPoint) -> f64) -> Result<Self> {
        let [n1, n2, n3] = grid.dims;
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    values.push(f(grid.point(i, j, k)));
                }
            }
        }
        ScalarField::new(grid, values, boundary)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.grid.index(i, j, k)]
    }

    /// Value at an arbitrary integer index, resolving ghost cells by the
    /// per-axis boundary policy.
    #[inline]
    pub fn at(&self, i: isize, j: isize, k: isize) -> f64 {
        let mut idx = [i, j, k];
        for a in 0..3 {
            let n = self.grid.dims[a] as isize;
            let v = idx[a];
            if v < 0 || v >= n {
                match self.boundary[a] {
                    Boundary::FarField { low, high } => return if v < 0 { low } else { high },
                    Boundary::Edge => idx[a] = v.clamp(0, n - 1),
                    Boundary::Periodic => idx[a] = v.rem_euclid(n),
                }
            }
        }
        self.values[self.grid.index(idx[0] as usize, idx[1] as usize, idx[2] as usize)]
    }

    /// Bounds-checked accessor.
    pub fn try_get(&self, i: isize, j: isize, k: isize) -> Result<f64> {
        let d = self.grid.dims;
        if i < 0 || j < 0 || k < 0 || i >= d[0] as isize || j >= d[1] as isize || k >= d[2] as isize {
            return Err(Error::IndexOutOfRange(i, j, k));
        }
        Ok(self.get(i as usize, j as usize, k as usize))
    }

    /// Linear interpolation along axis 3 at fractional index `z` of column `(i, j)`.
    #[inline]
    pub fn interp_x3(&self, i: isize, j: isize, z: f64) -> f64 {
        let k0 = z.floor();
        let t = z - k0;
        let k0 = k0 as isize;
        let a = self.at(i, j, k0);
        if t == 0.0 {
            return a;
        }
        a + t * (self.at(i, j, k0 + 1) - a)
    }

    /// Trilinear interpolation at a physical point.
    pub fn interpolate(&self, p: GroupPoint) -> f64 {
        let g = &self.grid;
        let f = [
            g.fractional_index(0, p.x1),
            g.fractional_index(1, p.x2),
            g.fractional_index(2, p.x3),
        ];
        let base = [f[0].floor(), f[1].floor(), f[2].floor()];
        let t = [f[0] - base[0], f[1] - base[1], f[2] - base[2]];
        let b = [base[0] as isize, base[1] as isize, base[2] as isize];
        let mut acc = 0.0;
        for c in 0..8 {
            let o = [c & 1, (c >> 1) & 1, (c >> 2) & 1];
            let mut w = 1.0;
            for a in 0..3 {
                w *= if o[a] == 1 { t[a] } else { 1.0 - t[a] };
            }
            if w != 0.0 {
                acc += w * self.at(b[0] + o[0] as isize, b[1] + o[1] as isize, b[2] + o[2] as isize);
            }
        }
        acc
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Same grid and boundary policy, new values.
    pub fn with_values(&self, values: Vec<f64>) -> ScalarField {
        assert_eq!(values.len(), self.values.len());
        ScalarField {
            grid: self.grid.clone(),
            values,
            boundary: self.boundary,
        }
    }

    /// Applies `f` pointwise to values and far-field constants.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        let values = self.values.iter().map(|&v| f(v)).collect();
        let mut boundary = self.boundary;
        for b in boundary.iter_mut() {
            if let Boundary::FarField { low, high } = b {
                *b = Boundary::FarField {
                    low: f(*low),
                    high: f(*high),
                };
            }
        }
        ScalarField {
            grid: self.grid.clone(),
            values,
            boundary,
        }
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A column `(i, j, ·)` of a field, after resolving the horizontal boundary policy.
pub(crate) enum Column<'a> {
    Const(f64),
    Slice(&'a [f64]),
}

impl ScalarField {
    pub(crate) fn column(&self, i: isize, j: isize) -> Column<'_> {
        let mut idx = [i, j];
        for a in 0..2 {
            let n = self.grid.dims[a] as isize;
            let v = idx[a];
            if v < 0 || v >= n {
                match self.boundary[a] {
                    Boundary::FarField { low, high } => return Column::Const(if v < 0 { low } else { high }),
                    Boundary::Edge => idx[a] = v.clamp(0, n - 1),
                    Boundary::Periodic => idx[a] = v.rem_euclid(n),
                }
            }
        }
        let n3 = self.grid.dims[2];
        let start = self.grid.index(idx[0] as usize, idx[1] as usize, 0);
        Column::Slice(&self.values[start..start + n3])
    }

    #[inline]
    fn resolve_x3(&self, col: &[f64], k: isize) -> f64 {
        let n = col.len() as isize;
        if k >= 0 && k < n {
            return col[k as usize];
        }
        match self.boundary[2] {
            Boundary::FarField { low, high } => {
                if k < 0 {
                    low
                } else {
                    high
                }
            }
            Boundary::Edge => col[k.clamp(0, n - 1) as usize],
            Boundary::Periodic => col[k.rem_euclid(n) as usize],
        }
    }

    /// `out[k] += Σ_o taps[o] · u(i, j, k + offset + o)` for every `k` of a column.
    pub(crate) fn add_column_taps(&self, i: isize, j: isize, offset: isize, taps: &[f64], out: &mut [f64]) {
        match self.column(i, j) {
            Column::Const(c) => {
                let s: f64 = taps.iter().sum::<f64>() * c;
                out.iter_mut().for_each(|o| *o += s);
            }
            Column::Slice(col) => {
                let n = col.len() as isize;
                let len = taps.len() as isize;
                let k_lo = (-offset).clamp(0, n);
                let k_hi = (n - offset - len + 1).clamp(k_lo, n);
                for k in (0..k_lo).chain(k_hi..n) {
                    let mut acc = 0.0;
                    for (o, &w) in taps.iter().enumerate() {
                        acc += w * self.resolve_x3(col, k + offset + o as isize);
                    }
                    out[k as usize] += acc;
                }
                match taps {
                    [w0, w1] => {
                        for k in k_lo..k_hi {
                            let b = (k + offset) as usize;
                            out[k as usize] += w0 * col[b] + w1 * col[b + 1];
                        }
                    }
                    _ => {
                        for k in k_lo..k_hi {
                            let b = (k + offset) as usize;
                            let acc: f64 = taps.iter().zip(&col[b..b + taps.len()]).map(|(w, v)| w * v).sum();
                            out[k as usize] += acc;
                        }
                    }
                }
            }
        }
    }

    /// `out[k] += w · u(i, j, k + shift)` with linear interpolation in the
    /// fractional shift (measured in cells).
    #[inline]
    pub(crate) fn add_shifted_column(&self, i: isize, j: isize, shift: f64, w: f64, out: &mut [f64]) {
        let fl = shift.floor();
        let t = shift - fl;
        self.add_column_taps(i, j, fl as isize, &[w * (1.0 - t), w * t], out);
    }
}

/// Far field `c` on clamped axes (edge replication when `None`), wrap on periodic ones.
pub(crate) fn default_boundary(grid: &UniformGrid3, far: Option<f64>) -> [Boundary; 3] {
    let mut b = [Boundary::Edge; 3];
    for a in 0..3 {
        b[a] = if grid.periodic[a] {
            Boundary::Periodic
        } else if let Some(c) = far {
            Boundary::FarField { low: c, high: c }
        } else {
            Boundary::Edge
        };
    }
    b
}
