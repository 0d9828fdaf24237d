use rayon::prelude::*;

use super::BumpKernel;
use crate::error::{Error, Result};
use crate::geometry::{ScalarField, UniformGrid3};

/// One horizontal offset `(p h1, q h2)` of the kernel table with its vertical
/// nodes `ζ` and weights.
#[derive(Debug, Clone)]
struct KernelColumn {
    p: isize,
    q: isize,
    zeta: Vec<f64>,
    weight: Vec<f64>,
    half_width: f64,
}

/// Kernel table of `J^ε` laid out for a fixed grid spacing.
///
/// Horizontal offsets are grid multiples; each offset carries the exact
/// marginal `Ĵ^ε h1 h2`, distributed over vertical nodes in proportion to
/// `J^ε`. The weights are normalized to total 1, so constants are reproduced
/// exactly and the operator is monotone.
#[derive(Debug, Clone)]
pub struct ConvolutionPlan {
    spacing: [f64; 3],
    columns: Vec<KernelColumn>,
}

impl ConvolutionPlan {
    pub fn new(kernel: &BumpKernel, grid: &UniformGrid3) -> Result<Self> {
        let [h1, h2, h3] = grid.spacing;
        let rs = kernel.horizontal_radius();
        let vz = kernel.vertical_radius();
        for (axis, cells) in [(0, 2.0 * rs / h1), (1, 2.0 * rs / h2), (2, 2.0 * vz / h3)] {
            if cells < 3.0 {
                return Err(Error::SupportUnresolved { axis, cells });
            }
        }
        let (pm, qm) = ((rs / h1).floor() as isize, (rs / h2).floor() as isize);
        let mut columns = Vec::new();
        for p in -pm..=pm {
            for q in -qm..=qm {
                let (a, b) = (p as f64 * h1, q as f64 * h2);
                let rho2 = a * a + b * b;
                let mass = kernel.hat(rho2) * h1 * h2;
                if mass <= 0.0 {
                    continue;
                }
                let half_width = vz - rho2;
                // node spacing at most h3/4 so the vertical profile is resolved
                // before it is interpolated onto the grid
                let m = ((half_width / (0.25 * h3)).ceil() as usize).max(8);
                let dz = half_width / m as f64;
                let zeta: Vec<f64> = (-(m as isize)..=m as isize).map(|k| k as f64 * dz).collect();
                let shape: Vec<f64> = zeta
                    .iter()
                    .map(|&z| kernel.eval(crate::geometry::GroupPoint::new(a, b, z)))
                    .collect();
                let total: f64 = shape.iter().sum();
                if total <= 0.0 {
                    continue;
                }
                let weight = shape.iter().map(|s| mass * s / total).collect();
                columns.push(KernelColumn {
                    p,
                    q,
                    zeta,
                    weight,
                    half_width,
                });
            }
        }
        let sum: f64 = columns.iter().flat_map(|c| c.weight.iter()).sum();
        for c in &mut columns {
            c.weight.iter_mut().for_each(|w| *w /= sum);
        }
        Ok(ConvolutionPlan {
            spacing: grid.spacing,
            columns,
        })
    }

    /// Number of horizontal offsets in the table.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// `(J^ε * m)(x) = Σ_z w(z) m(x∘z)` with linear interpolation in `x3`.
    pub fn apply(&self, field: &ScalarField) -> Result<ScalarField> {
        let g = &field.grid;
        if g.spacing != self.spacing {
            return Err(Error::InvalidGrid(
                "convolution plan was built for a different spacing".into(),
            ));
        }
        let [_, n2, n3] = g.dims;
        let [h1, h2, h3] = g.spacing;
        let mut out = vec![0.0; g.len()];
        out.par_chunks_mut(n3)
            .enumerate()
            .for_each_init(Vec::new, |taps, (col, slab)| {
                let (i, j) = ((col / n2) as isize, (col % n2) as isize);
                let x1 = g.coord(0, i);
                let x2 = g.coord(1, j);
                for c in &self.columns {
                    // x∘(p h1, q h2, ζ) has height x3 + ζ + (x1 q h2 − x2 p h1)/2
                    let shift = 0.5 * (x1 * c.q as f64 * h2 - x2 * c.p as f64 * h1);
                    let lo = ((shift - c.half_width) / h3).floor() as isize;
                    let hi = ((shift + c.half_width) / h3).floor() as isize + 1;
                    taps.clear();
                    taps.resize((hi - lo + 1) as usize, 0.0);
                    for (&z, &w) in c.zeta.iter().zip(&c.weight) {
                        let pos = (shift + z) / h3;
                        let fl = pos.floor();
                        let t = pos - fl;
                        let o = (fl as isize - lo) as usize;
                        taps[o] += w * (1.0 - t);
                        taps[o + 1] += w * t;
                    }
                    field.add_column_taps(i + c.p, j + c.q, lo, taps, slab);
                }
            });
        let mut res = field.with_values(out);
        // constants pass through a unit-mass kernel unchanged
        res.boundary = field.boundary;
        Ok(res)
    }
}

/// Discrete group convolution `J^ε * m` on the grid of `field`.
pub fn group_convolve(kernel: &BumpKernel, field: &ScalarField) -> Result<ScalarField> {
    ConvolutionPlan::new(kernel, &field.grid)?.apply(field)
}
