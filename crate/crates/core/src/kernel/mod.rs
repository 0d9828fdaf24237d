//! Interaction kernels on H¹.
//!
//! Two kinds are supported: a smooth compactly supported bump that depends
//! only on `x1² + x2²` and `|x3|`, and the heat semigroup `e^{τΔ_H}`, which is
//! applied by solving the heat equation rather than through a kernel table.

mod convolve;
mod heat;
pub mod quadrature;

pub use convolve::{group_convolve, ConvolutionPlan};
pub use heat::{heat_semigroup, heat_stability_bound, heat_substeps};

use crate::error::{Error, Result};
use crate::geometry::GroupPoint;
use quadrature::{gauss_legendre, trapezoid_nodes};

/// Minimum number of quadrature nodes per axis for kernel reductions.
pub const MIN_REDUCTION_NODES: usize = 33;

/// `g(q) = exp(−1/(1−q))` for `q < 1`, else 0.
#[inline]
pub(crate) fn bump_profile(q: f64) -> f64 {
    if q < 1.0 {
        (-1.0 / (1.0 - q)).exp()
    } else {
        0.0
    }
}

/// `J(x) = C · exp(−1/(1 − q))`, `q = (x1² + x2² + |x3|)/s²`, rescaled by
/// `J^ε(x) = ε⁻⁴ J(x1/ε, x2/ε, x3/ε²)`. `C` gives unit mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpKernel {
    /// Radius `s` of the unscaled support in the variable `√(ρ² + |x3|)`.
    pub support: f64,
    /// Scale `ε` (1 for the unscaled kernel).
    pub eps: f64,
    norm: f64,
}

impl BumpKernel {
    pub fn new(support: f64) -> Result<Self> {
        if !(support > 0.0 && support.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel support must be positive, got {support}"
            )));
        }
        // ∫_{R³} g = 2π s⁴ ∫_0^1 t g(t) dt, with u = ρ², v = |x3|, w = u + v
        let moment = gauss_legendre(0.0, 1.0, 64, |t| t * bump_profile(t));
        let s4 = support.powi(4);
        Ok(BumpKernel {
            support,
            eps: 1.0,
            norm: 1.0 / (2.0 * std::f64::consts::PI * s4 * moment),
        })
    }

    /// Normalization constant `C` of the unscaled kernel.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Gauge radius outside which `J^ε` vanishes: `2 s ε`.
    pub fn support_radius(&self) -> f64 {
        2.0 * self.support * self.eps
    }

    /// Horizontal support radius `s ε`.
    pub fn horizontal_radius(&self) -> f64 {
        self.support * self.eps
    }

    /// Vertical support half-width `s² ε²`.
    pub fn vertical_radius(&self) -> f64 {
        let r = self.support * self.eps;
        r * r
    }

    pub fn eval(&self, x: GroupPoint) -> f64 {
        let e = self.eps;
        let s2 = self.support * self.support;
        let q = (x.rho2() / (e * e) + x.x3.abs() / (e * e)) / s2;
        self.norm * bump_profile(q) / (e * e * e * e)
    }

    /// `Ĵ^ε(x1, x2) = ∫ J^ε dx3 = 2 C s² ε⁻² ∫_{ρ²/(sε)²}^1 g(t) dt`.
    pub fn hat(&self, rho2: f64) -> f64 {
        let e = self.eps;
        let s2 = self.support * self.support;
        let a = rho2 / (e * e * s2);
        if a >= 1.0 {
            return 0.0;
        }
        let tail = gauss_legendre(a, 1.0, 32, bump_profile);
        2.0 * self.norm * s2 * tail / (e * e)
    }

    /// `J̄^ε(r) = ∫ Ĵ^ε(r² + y²) dy`.
    pub fn bar(&self, r: f64) -> f64 {
        let rs = self.horizontal_radius();
        if r.abs() >= rs {
            return 0.0;
        }
        let ymax = (rs * rs - r * r).sqrt();
        let n = 4 * MIN_REDUCTION_NODES;
        let (nodes, w) = trapezoid_nodes(-ymax, ymax, n);
        nodes.iter().map(|&y| self.hat(r * r + y * y)).sum::<f64>() * w
    }

    pub fn rescaled(&self, eps: f64) -> BumpKernel {
        BumpKernel {
            eps: self.eps * eps,
            ..*self
        }
    }
}

/// Horizontal marginals of a kernel that is radial in `(x1, x2)`.
pub trait KernelMarginals: Sync {
    /// `J̄(r) = ∫ J dx2 dx3` at `(r, ·, ·)`.
    fn bar(&self, r: f64) -> f64;
    /// `Ĵ = ∫ J dx3` as a function of `x1² + x2²`.
    fn hat(&self, rho2: f64) -> f64;
    /// Horizontal radius beyond which both marginals are negligible or zero.
    fn horizontal_radius(&self) -> f64;

    /// `∫ Ĵ(r1² + y²) y² dy` by the trapezoid rule with `nodes` points.
    fn hat_second_moment(&self, r1: f64, nodes: usize) -> f64 {
        let rs = self.horizontal_radius();
        if r1.abs() >= rs {
            return 0.0;
        }
        let ymax = (rs * rs - r1 * r1).sqrt();
        let (ys, w) = trapezoid_nodes(-ymax, ymax, nodes);
        ys.iter().map(|&y| self.hat(r1 * r1 + y * y) * y * y).sum::<f64>() * w
    }
}

impl KernelMarginals for BumpKernel {
    fn bar(&self, r: f64) -> f64 {
        BumpKernel::bar(self, r)
    }
    fn hat(&self, rho2: f64) -> f64 {
        BumpKernel::hat(self, rho2)
    }
    fn horizontal_radius(&self) -> f64 {
        BumpKernel::horizontal_radius(self)
    }
}

/// Marginals of the heat kernel `e^{τΔ_H}`: the horizontal projection of the
/// diffusion is planar Brownian motion, so they are Gaussians of variance `2τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatMarginals {
    pub tau: f64,
}

impl KernelMarginals for HeatMarginals {
    fn bar(&self, r: f64) -> f64 {
        let v = 4.0 * self.tau;
        (-r * r / v).exp() / (std::f64::consts::PI * v).sqrt()
    }
    fn hat(&self, rho2: f64) -> f64 {
        let v = 4.0 * self.tau;
        (-rho2 / v).exp() / (std::f64::consts::PI * v)
    }
    fn horizontal_radius(&self) -> f64 {
        // exp(−r²/4τ) < 1e-17 beyond this radius
        (4.0 * self.tau * 40.0).sqrt()
    }
}

/// Smoothing kernel of the evolution scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Analytic(BumpKernel),
    /// Heat semigroup run for `tau`; `substeps = None` picks the smallest
    /// stable count.
    Heat {
        tau: f64,
        substeps: Option<usize>,
    },
}

impl KernelSpec {
    pub fn bump(support: f64) -> Result<Self> {
        Ok(KernelSpec::Analytic(BumpKernel::new(support)?))
    }

    pub fn heat(tau: f64) -> Self {
        KernelSpec::Heat { tau, substeps: None }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, KernelSpec::Analytic(_))
    }

    /// Horizontal marginals of either kernel kind.
    pub fn marginals(&self) -> Box<dyn KernelMarginals> {
        match *self {
            KernelSpec::Analytic(b) => Box::new(b),
            KernelSpec::Heat { tau, .. } => Box::new(HeatMarginals { tau }),
        }
    }

    pub fn as_bump(&self) -> Result<&BumpKernel> {
        match self {
            KernelSpec::Analytic(b) => Ok(b),
            KernelSpec::Heat { .. } => Err(Error::KernelKindMismatch),
        }
    }
}

/// Value of an analytic kernel at `x`.
pub fn eval_kernel(kernel: &KernelSpec, x: GroupPoint) -> Result<f64> {
    Ok(kernel.as_bump()?.eval(x))
}

/// `J^ε(x) = ε⁻⁴ J(x1/ε, x2/ε, x3/ε²)`; the heat semigroup time scales by `ε²`.
pub fn rescale_kernel(kernel: &KernelSpec, eps: f64) -> Result<KernelSpec> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    Ok(match *kernel {
        KernelSpec::Analytic(b) => KernelSpec::Analytic(b.rescaled(eps)),
        KernelSpec::Heat { tau, substeps } => KernelSpec::Heat {
            tau: tau * eps * eps,
            substeps,
        },
    })
}

/// Ĵ on a square quadrature grid and J̄ on a line, both node-centred on the support.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedKernels {
    /// Node coordinates shared by both axes of `hat_j` and by `bar_j`.
    pub nodes: Vec<f64>,
    pub spacing: f64,
    /// `hat_j[a * n + b] = Ĵ(nodes[a], nodes[b])`.
    pub hat_j: Vec<f64>,
    pub bar_j: Vec<f64>,
}

impl ReducedKernels {
    pub fn hat_mass(&self) -> f64 {
        self.hat_j.iter().sum::<f64>() * self.spacing * self.spacing
    }

    pub fn bar_mass(&self) -> f64 {
        self.bar_j.iter().sum::<f64>() * self.spacing
    }
}

/// Marginals `Ĵ(x1, x2) = ∫ J dx3` and `J̄(r) = ∫ J dx2 dx3` sampled with
/// `nodes` points per axis across the horizontal support.
pub fn reduce_kernels(kernel: &KernelSpec, nodes: usize) -> Result<ReducedKernels> {
    let b = kernel.as_bump()?;
    if nodes < MIN_REDUCTION_NODES {
        return Err(Error::InvalidParameter(format!(
            "kernel reductions need at least {MIN_REDUCTION_NODES} nodes per axis"
        )));
    }
    let rs = b.horizontal_radius();
    let (xs, h) = trapezoid_nodes(-rs, rs, nodes);
    let mut hat_j = Vec::with_capacity(nodes * nodes);
    for &a in &xs {
        for &c in &xs {
            hat_j.push(b.hat(a * a + c * c));
        }
    }
    let bar_j = xs.iter().map(|&r| b.bar(r)).collect();
    Ok(ReducedKernels {
        nodes: xs,
        spacing: h,
        hat_j,
        bar_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dilate, gauge_norm, group_inv};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: 3-D trapezoid over the support box, x3 = 0 a node
    /// (where |x3| kinks), Richardson-extrapolated over two spacings.
    fn brute_mass(k: &BumpKernel, n: usize) -> f64 {
        let trap = |n: usize| {
            let rs = k.horizontal_radius();
            let vz = k.vertical_radius();
            let (xs, hx) = trapezoid_nodes(-rs, rs, n);
            let (zs, hz) = trapezoid_nodes(-vz, vz, n);
            let mut acc = 0.0;
            for &a in &xs {
                for &b in &xs {
                    for &c in &zs {
                        acc += k.eval(GroupPoint::new(a, b, c));
                    }
                }
            }
            acc * hx * hx * hz
        };
        let (coarse, fine) = (trap(n), trap(2 * n - 1));
        (4.0 * fine - coarse) / 3.0
    }

    #[test]
    fn mass_is_one_by_independent_quadrature() {
        for s in [1.0, 3.0] {
            let k = BumpKernel::new(s).unwrap();
            let m = brute_mass(&k, 81);
            assert!((m - 1.0).abs() < 1e-6, "s = {s}: mass {m}");
        }
    }

    #[test]
    fn vanishes_outside_gauge_support() {
        let k = BumpKernel::new(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x = GroupPoint::new(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-9.0..9.0),
            );
            if gauge_norm(x) > k.support_radius() {
                assert_eq!(k.eval(x), 0.0);
            }
        }
    }

    #[test]
    fn symmetric_under_inversion() {
        let k = KernelSpec::bump(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = GroupPoint::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-3.0..3.0),
            );
            assert_eq!(eval_kernel(&k, x).unwrap(), eval_kernel(&k, group_inv(x)).unwrap());
        }
        assert_eq!(
            eval_kernel(&KernelSpec::heat(1.0), GroupPoint::IDENTITY),
            Err(Error::KernelKindMismatch)
        );
    }

    #[test]
    fn rescaling() {
        let k = KernelSpec::bump(2.0).unwrap();
        assert_eq!(rescale_kernel(&k, 1.0).unwrap(), k);
        let base = *k.as_bump().unwrap();
        let small = *rescale_kernel(&k, 0.1).unwrap().as_bump().unwrap();
        let m = brute_mass(&small, 81);
        assert!((m - 1.0).abs() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = GroupPoint::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-4.0..4.0),
            );
            let lhs = small.eval(dilate(0.1, x)) * 1e-4;
            assert!((lhs - base.eval(x)).abs() <= 1e-12 * (1.0 + base.eval(x)));
        }
        assert_eq!(
            rescale_kernel(&KernelSpec::heat(1.0), 0.1).unwrap(),
            KernelSpec::Heat {
                tau: 1.0 * 0.1 * 0.1,
                substeps: None
            }
        );
        assert!(rescale_kernel(&k, 0.0).is_err());
    }

    #[test]
    fn reductions_preserve_mass_and_symmetry() {
        let k = KernelSpec::bump(3.0).unwrap();
        let red = reduce_kernels(&k, 65).unwrap();
        assert!((red.bar_mass() - 1.0).abs() < 1e-6, "{}", red.bar_mass());
        assert!((red.hat_mass() - 1.0).abs() < 1e-6, "{}", red.hat_mass());
        let n = red.nodes.len();
        for a in 0..n {
            assert_eq!(red.bar_j[a], red.bar_j[n - 1 - a]);
            for b in 0..n {
                assert_eq!(red.hat_j[a * n + b], red.hat_j[b * n + a]);
            }
        }
        assert!(reduce_kernels(&k, 17).is_err());
    }

    #[test]
    fn bar_at_origin_matches_dense_quadrature() {
        // oracle: J̄(0) = ∫∫ J(0, y, z) dy dz by a dense 2-D trapezoid with
        // Richardson extrapolation in z (kink at z = 0)
        let k = BumpKernel::new(3.0).unwrap();
        let dense = |n: usize| {
            let (ys, hy) = trapezoid_nodes(-3.0, 3.0, n);
            let (zs, hz) = trapezoid_nodes(-9.0, 9.0, n);
            ys.iter()
                .map(|&y| zs.iter().map(|&z| k.eval(GroupPoint::new(0.0, y, z))).sum::<f64>())
                .sum::<f64>()
                * hy
                * hz
        };
        let oracle = (4.0 * dense(801) - dense(401)) / 3.0;
        assert!(
            (k.bar(0.0) - oracle).abs() < 1e-7 * oracle,
            "{} vs {}",
            k.bar(0.0),
            oracle
        );
    }

    #[test]
    fn reduction_commutes_with_rescaling() {
        let k = BumpKernel::new(2.0).unwrap();
        let eps = 0.2;
        let ke = k.rescaled(eps);
        for r in [0.0, 0.05, 0.13, 0.31] {
            let lhs = ke.bar(r);
            let rhs = k.bar(r / eps) / eps;
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
        }
    }
}
