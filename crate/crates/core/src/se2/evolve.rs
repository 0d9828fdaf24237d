use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{se2_exp, AlgebraCoords, SE2Point};
use crate::engine::{evolve_with, EvolutionParams, Smoother, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{Boundary, GroupPoint, ScalarField, UniformGrid3};
use crate::kernel::{rescale_kernel, BumpKernel, KernelSpec};
use crate::profile::InstantonProfile;

/// Planar box `[−half, half]²` with `n` nodes per axis times `n_theta`
/// periodic nodes on `[0, 2π)`.
pub fn se2_grid(half: f64, n: usize, n_theta: usize) -> Result<UniformGrid3> {
    if !(half > 0.0 && half.is_finite()) || n < 3 {
        return Err(Error::InvalidGrid(format!("invalid planar box half = {half}, n = {n}")));
    }
    let h = 2.0 * half / (n - 1) as f64;
    UniformGrid3::with_periodic(
        GroupPoint::new(-half, -half, 0.0),
        [h, h, TAU / n_theta as f64],
        [n, n, n_theta],
        [false, false, true],
    )
}

fn check_grid(grid: &UniformGrid3) -> Result<()> {
    let period = grid.spacing[2] * grid.dims[2] as f64;
    if !grid.periodic[2] || (period - TAU).abs() > 1e-9 * TAU {
        return Err(Error::InvalidGrid(
            "the theta axis must be periodic with period 2 pi".into(),
        ));
    }
    Ok(())
}

/// `Y₁²u + Y₂²u = cos²θ u₁₁ + 2 sinθ cosθ u₁₂ + sin²θ u₂₂ + u_θθ` by centred
/// differences. Far-field constants map to zero.
pub fn se2_sub_laplacian(field: &ScalarField) -> Result<ScalarField> {
    let g = &field.grid;
    check_grid(g)?;
    let [h1, h2, h3] = g.spacing;
    let [_, n2, n3] = g.dims;
    let mut values = vec![0.0; g.len()];
    values.par_chunks_mut(n2 * n3).enumerate().for_each(|(i, row)| {
        let i = i as isize;
        for j in 0..n2 as isize {
            for k in 0..n3 as isize {
                let u = |di: isize, dj: isize, dk: isize| field.at(i + di, j + dj, k + dk);
                let c = u(0, 0, 0);
                let u11 = (u(1, 0, 0) - 2.0 * c + u(-1, 0, 0)) / (h1 * h1);
                let u22 = (u(0, 1, 0) - 2.0 * c + u(0, -1, 0)) / (h2 * h2);
                let u12 = (u(1, 1, 0) - u(1, -1, 0) - u(-1, 1, 0) + u(-1, -1, 0)) / (4.0 * h1 * h2);
                let utt = (u(0, 0, 1) - 2.0 * c + u(0, 0, -1)) / (h3 * h3);
                let (s, co) = g.coord(2, k).sin_cos();
                row[j as usize * n3 + k as usize] = co * co * u11 + 2.0 * s * co * u12 + s * s * u22 + utt;
            }
        }
    });
    let mut boundary = field.boundary;
    for b in boundary.iter_mut() {
        if let Boundary::FarField { .. } = b {
            *b = Boundary::FarField { low: 0.0, high: 0.0 };
        }
    }
    ScalarField::new(g.clone(), values, boundary)
}

/// Three-point rule `(w, 1 − 2w, w)` at offsets `−d, 0, d` with variance `2τ`,
/// `d ≥ min_offset` and `w = τ/d² ≤ 1/2`.
fn three_point(tau: f64, min_offset: f64) -> [(f64, f64); 3] {
    let d = min_offset.max((2.0 * tau).sqrt());
    let w = tau / (d * d);
    [(-d, w), (0.0, 1.0 - 2.0 * w), (d, w)]
}

/// Bilinear interpolation in the `θ`-slice `k`.
fn planar(m: &ScalarField, x1: f64, x2: f64, k: isize) -> f64 {
    let g = &m.grid;
    let (f1, f2) = (g.fractional_index(0, x1), g.fractional_index(1, x2));
    let (b1, b2) = (f1.floor(), f2.floor());
    let (t1, t2) = (f1 - b1, f2 - b2);
    let (i, j) = (b1 as isize, b2 as isize);
    let a = (1.0 - t1) * m.at(i, j, k) + t1 * m.at(i + 1, j, k);
    let b = (1.0 - t1) * m.at(i, j + 1, k) + t1 * m.at(i + 1, j + 1, k);
    (1.0 - t2) * a + t2 * b
}

/// Heat semigroup of `Y₁² + Y₂²` for time `tau` by Strang splitting: each
/// substep diffuses half a substep along `θ`, a full one along the line
/// `x + s(cos θ, sin θ)` within each slice, then half along `θ` again. Each
/// one-dimensional flow is a positive three-point rule with the exact
/// variance; the `θ` rule sits on grid nodes and the line rule uses bilinear
/// interpolation. The smoother is monotone and fixes constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se2HeatSmoother {
    pub tau: f64,
    pub substeps: usize,
}

impl Se2HeatSmoother {
    fn theta_pass(&self, m: &ScalarField, tau: f64) -> ScalarField {
        let g = &m.grid;
        let rule = three_point(tau, g.spacing[2]);
        let [_, n2, n3] = g.dims;
        let mut values = vec![0.0; g.len()];
        values.par_chunks_mut(n2 * n3).enumerate().for_each(|(i, row)| {
            for j in 0..n2 {
                for k in 0..n3 {
                    row[j * n3 + k] = rule
                        .iter()
                        .map(|&(s, w)| w * m.interp_x3(i as isize, j as isize, k as f64 + s / g.spacing[2]))
                        .sum();
                }
            }
        });
        m.with_values(values)
    }

    fn line_pass(&self, m: &ScalarField, tau: f64) -> ScalarField {
        let g = &m.grid;
        let rule = three_point(tau, g.max_horizontal_spacing());
        let [_, n2, n3] = g.dims;
        let mut values = vec![0.0; g.len()];
        values.par_chunks_mut(n2 * n3).enumerate().for_each(|(i, row)| {
            let x1 = g.coord(0, i as isize);
            for k in 0..n3 {
                let (s, c) = g.coord(2, k as isize).sin_cos();
                for j in 0..n2 {
                    let x2 = g.coord(1, j as isize);
                    row[j * n3 + k] = rule
                        .iter()
                        .map(|&(d, w)| w * planar(m, x1 + d * c, x2 + d * s, k as isize))
                        .sum();
                }
            }
        });
        m.with_values(values)
    }
}

impl Smoother for Se2HeatSmoother {
    fn smooth(&self, m: &ScalarField) -> Result<ScalarField> {
        check_grid(&m.grid)?;
        if !(self.tau >= 0.0 && self.tau.is_finite()) || self.substeps == 0 {
            return Err(Error::InvalidParameter(format!(
                "invalid heat smoother: tau = {}, substeps = {}",
                self.tau, self.substeps
            )));
        }
        let dt = self.tau / self.substeps as f64;
        let mut u = m.clone();
        for _ in 0..self.substeps {
            u = self.theta_pass(&u, 0.5 * dt);
            u = self.line_pass(&u, dt);
            u = self.theta_pass(&u, 0.5 * dt);
        }
        Ok(u)
    }
}

/// `m ↦ Σ_a J^ε(a) m(exp_x(a)) w(a)` on a midpoint rule over the support of
/// `J^ε` in algebra coordinates, with trilinear interpolation at the targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Se2AlgebraSmoother {
    /// Nodes with positive weight; weights sum to one.
    pub nodes: Vec<(AlgebraCoords, f64)>,
}

impl Se2AlgebraSmoother {
    /// `kernel` is `J^ε` itself; `per_axis` midpoints per algebra axis.
    pub fn new(kernel: &BumpKernel, per_axis: usize) -> Result<Self> {
        if per_axis < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 nodes per axis, got {per_axis}"
            )));
        }
        let (rh, rv) = (kernel.horizontal_radius(), kernel.vertical_radius());
        let node = |r: f64, i: usize| -r + (i as f64 + 0.5) * 2.0 * r / per_axis as f64;
        let mut nodes = Vec::new();
        for i in 0..per_axis {
            for j in 0..per_axis {
                for k in 0..per_axis {
                    let a = AlgebraCoords::new(node(rh, i), node(rh, j), node(rv, k));
                    let w = kernel.eval(a.into());
                    if w > 0.0 {
                        nodes.push((a, w));
                    }
                }
            }
        }
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter(
                "kernel quadrature has no positive nodes".into(),
            ));
        }
        nodes.iter_mut().for_each(|n| n.1 /= total);
        Ok(Se2AlgebraSmoother { nodes })
    }
}

impl Smoother for Se2AlgebraSmoother {
    fn smooth(&self, m: &ScalarField) -> Result<ScalarField> {
        let g = &m.grid;
        check_grid(g)?;
        let [_, n2, n3] = g.dims;
        let (lo1, hi1, lo2, hi2) = (g.coord(0, 0), g.upper(0), g.coord(1, 0), g.upper(1));
        let far = [0, 1].map(|a| matches!(m.boundary[a], Boundary::FarField { .. }));
        let rows: Vec<Result<Vec<f64>>> = (0..g.dims[0])
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0.0; n2 * n3];
                for j in 0..n2 {
                    for k in 0..n3 {
                        let p = g.point(i, j, k);
                        let x = SE2Point::new(p.x1, p.x2, p.x3);
                        let mut acc = 0.0;
                        for &(a, w) in &self.nodes {
                            let y = se2_exp(x, a);
                            let out1 = y.x1 < lo1 || y.x1 > hi1;
                            let out2 = y.x2 < lo2 || y.x2 > hi2;
                            if (out1 && !far[0]) || (out2 && !far[1]) {
                                return Err(Error::InterpolationOutOfDomain(y.x1, y.x2));
                            }
                            acc += w * m.interpolate(GroupPoint::new(y.x1, y.x2, y.theta));
                        }
                        row[j * n3 + k] = acc;
                    }
                }
                Ok(row)
            })
            .collect();
        let mut values = Vec::with_capacity(g.len());
        for r in rows {
            values.extend(r?);
        }
        Ok(m.with_values(values))
    }
}

/// Default midpoint count per algebra axis for [`Se2AlgebraSmoother`].
const ALGEBRA_NODES: usize = 9;

/// Runs the two-step scheme on a `θ`-periodic grid. A heat kernel selects the
/// split semigroup (one substep unless the kernel fixes a count); an analytic
/// kernel selects the algebra-coordinate convolution.
pub fn se2_evolve(m0: &ScalarField, p: &EvolutionParams, snapshot_times: &[f64]) -> Result<Trajectory> {
    p.validate()?;
    check_grid(&m0.grid)?;
    let smoother: Box<dyn Smoother> = match rescale_kernel(&p.kernel, p.eps)? {
        KernelSpec::Heat { tau, substeps } => Box::new(Se2HeatSmoother {
            tau,
            substeps: substeps.unwrap_or(1),
        }),
        KernelSpec::Analytic(b) => Box::new(Se2AlgebraSmoother::new(&b, ALGEBRA_NODES)?),
    };
    evolve_with(m0, p, smoother.as_ref(), snapshot_times, |_, _| Ok(()))
}

/// `m = m̄((|x̂| − ρ)/ε)` for every `θ`: the disk of radius `ρ` lifted to all
/// orientations, negative inside, far field `m_β`.
pub fn init_lifted_disk(radius: f64, eps: f64, profile: &InstantonProfile, grid: &UniformGrid3) -> Result<ScalarField> {
    check_grid(grid)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let spacing = grid.max_horizontal_spacing();
    if !(eps >= 2.0 * spacing) {
        return Err(Error::ResolutionTooCoarse { eps, spacing });
    }
    let mb = profile.m_beta;
    let far = Boundary::FarField { low: mb, high: mb };
    ScalarField::from_fn(grid.clone(), [far, far, Boundary::Periodic], |x| {
        profile.eval((x.rho2().sqrt() - radius) / eps)
    })
}

/// Area of the planar projection of `{m < 0}`.
pub fn projected_area(m: &ScalarField) -> f64 {
    let [n1, n2, n3] = m.grid.dims;
    let cells = (0..n1)
        .flat_map(|i| (0..n2).map(move |j| (i, j)))
        .filter(|&(i, j)| (0..n3).any(|k| m.get(i, j, k) < 0.0))
        .count();
    cells as f64 * m.grid.spacing[0] * m.grid.spacing[1]
}
