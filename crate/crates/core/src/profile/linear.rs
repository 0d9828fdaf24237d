use nalgebra::{DMatrix, DVector};

use super::{InstantonProfile, LineKernel};
use crate::error::{Error, Result};

/// Smallest admissible `1 − m̄²` in the weight of `L²(μ)`.
pub const MIN_WEIGHT: f64 = 1e-12;

/// Tolerance on `‖𝓛m₁ − R̂_⊥‖_∞ / (1 + ‖R̂‖_∞)` accepted by [`solve_corrector`].
const SOLVE_TOL: f64 = 1e-6;

/// `(𝓛f)(r) = −f(r) + β(1 − m̄²(r)) (J̄ ∗ f)(r)`, with `f = 0` off the grid.
pub fn apply_linearized(f: &[f64], profile: &InstantonProfile, kernel: &LineKernel) -> Vec<f64> {
    assert_eq!(f.len(), profile.values.len());
    let c = kernel.convolve(f, 0.0, 0.0);
    profile
        .values
        .iter()
        .zip(f)
        .zip(c)
        .map(|((m, fi), ci)| -fi + profile.beta * (1.0 - m * m) * ci)
        .collect()
}

/// `⟨f, g⟩_{L²(μ)} = ∫ f g / (1 − m̄²) dr` on the phase grid.
///
/// The integrands decay to zero at the ends of the grid, so the trapezoid
/// end corrections are dropped; this keeps `𝓛` exactly symmetric in the
/// discrete inner product.
pub fn l2mu_inner(f: &[f64], g: &[f64], profile: &InstantonProfile) -> Result<f64> {
    assert_eq!(f.len(), profile.values.len());
    assert_eq!(g.len(), profile.values.len());
    let h = profile.grid.spacing();
    let mut acc = 0.0;
    for ((a, b), m) in f.iter().zip(g).zip(&profile.values) {
        let w = 1.0 - m * m;
        if w < MIN_WEIGHT {
            return Err(Error::WeightBlowup(w));
        }
        acc += a * b / w;
    }
    Ok(acc * h)
}

/// Output of [`solve_corrector`].
#[derive(Debug, Clone, PartialEq)]
pub struct Corrector {
    /// `m₁`, with no `m̄′` component in `L²(μ)`.
    pub m1: Vec<f64>,
    /// `R̂_⊥ = R̂ − c m̄′`.
    pub rhs: Vec<f64>,
    /// Coefficient `c = ⟨R̂, m̄′⟩_μ / ⟨m̄′, m̄′⟩_μ` of the removed part.
    pub parallel: f64,
    /// `‖𝓛m₁ − R̂_⊥‖_∞`.
    pub residual: f64,
}

/// Solves `𝓛m₁ = R̂_⊥` subject to `⟨m₁, m̄′⟩_μ = 0`.
///
/// The constraint is imposed through a bordered system
/// `[𝓛 m̄′; (W m̄′)ᵀ 0]`, `W = diag(h/(1 − m̄²))`, solved densely. The
/// multiplier absorbs the part of `R̂_⊥` that the discrete operator cannot
/// reach; it is reported through `residual` and must stay below tolerance.
pub fn solve_corrector(rhat: &[f64], profile: &InstantonProfile, kernel: &LineKernel) -> Result<Corrector> {
    let n = profile.values.len();
    assert_eq!(rhat.len(), n);
    let dm = profile.derivative();
    let norm2 = l2mu_inner(&dm, &dm, profile)?;
    let parallel = l2mu_inner(rhat, &dm, profile)? / norm2;
    let rhs: Vec<f64> = rhat.iter().zip(&dm).map(|(r, d)| r - parallel * d).collect();
    let rhs_scale = rhat.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    if rhs_scale == 0.0 {
        return Ok(Corrector {
            m1: vec![0.0; n],
            rhs,
            parallel,
            residual: 0.0,
        });
    }

    let h = profile.grid.spacing();
    let kk = kernel.half_width() as isize;
    let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..n {
        let m = profile.values[i];
        let s = profile.beta * (1.0 - m * m);
        a[(i, i)] -= 1.0;
        for (o, &w) in kernel.weights.iter().enumerate() {
            let j = i as isize + o as isize - kk;
            if j >= 0 && (j as usize) < n {
                a[(i, j as usize)] += s * w;
            }
        }
        a[(i, n)] = dm[i];
        a[(n, i)] = dm[i] * h / (1.0 - m * m);
    }
    let mut b = DVector::<f64>::zeros(n + 1);
    for i in 0..n {
        b[i] = rhs[i];
    }
    let sol = a.lu().solve(&b).ok_or(Error::SolvabilityViolated(f64::INFINITY))?;
    let m1: Vec<f64> = sol.iter().take(n).copied().collect();
    let lm = apply_linearized(&m1, profile, kernel);
    let residual = lm.iter().zip(&rhs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if residual > SOLVE_TOL * (1.0 + rhs_scale) {
        return Err(Error::SolvabilityViolated(residual));
    }
    Ok(Corrector {
        m1,
        rhs,
        parallel,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::BumpKernel;
    use crate::profile::{compute_instanton, InstantonOptions, Phase1DGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn setup() -> &'static (LineKernel, InstantonProfile) {
        static CELL: OnceLock<(LineKernel, InstantonProfile)> = OnceLock::new();
        CELL.get_or_init(|| {
            let g = Phase1DGrid::default();
            let k = LineKernel::sample(&BumpKernel::new(3.0).unwrap(), g.spacing()).unwrap();
            let p = compute_instanton(
                &k,
                1.2,
                g,
                InstantonOptions {
                    tol: 1e-12,
                    ..Default::default()
                },
            )
            .unwrap();
            (k, p)
        })
    }

    /// Smooth bump supported in `|r − c| < w`.
    fn bump(p: &InstantonProfile, c: f64, w: f64) -> Vec<f64> {
        p.grid
            .nodes()
            .iter()
            .map(|&r| {
                let q = ((r - c) / w).powi(2);
                if q < 1.0 {
                    (-1.0 / (1.0 - q)).exp()
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn random_compact(p: &InstantonProfile, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut f = vec![0.0; p.values.len()];
        for _ in 0..4 {
            let c = rng.gen_range(-4.0..4.0);
            let w = rng.gen_range(0.5..2.0);
            let a = rng.gen_range(-1.0..1.0);
            for (fi, b) in f.iter_mut().zip(bump(p, c, w)) {
                *fi += a * b;
            }
        }
        f
    }

    #[test]
    fn derivative_is_a_near_null_vector() {
        let (k, p) = setup();
        let dm = p.derivative();
        let l = apply_linearized(&dm, p, k);
        let sup = l.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let dmax = dm.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        // O(h²) with h = 0.05, relative to the size of m̄′
        assert!(sup < 0.01 * dmax * 0.05 * 0.05 * 100.0, "{sup}");
        assert!(apply_linearized(&vec![0.0; dm.len()], p, k).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn linearized_on_a_bump_matches_dense_quadrature() {
        // oracle: J̄ ∗ f by a 20× finer trapezoid rule on the exact J̄ and f
        let (k, p) = setup();
        let f = bump(p, 0.3, 1.5);
        let l = apply_linearized(&f, p, k);
        let kernel = BumpKernel::new(3.0).unwrap();
        let g = p.grid;
        for i in [g.n / 2 - 20, g.n / 2, g.n / 2 + 7, g.n / 2 + 30] {
            let r = g.node(i);
            let fine = 2401;
            let conv: f64 = (0..fine)
                .map(|t| {
                    let s = -3.0 + 6.0 * t as f64 / (fine - 1) as f64;
                    let x = r + s - 0.3;
                    let q = (x / 1.5).powi(2);
                    let fv = if q < 1.0 { (-1.0 / (1.0 - q)).exp() } else { 0.0 };
                    kernel.bar(s) * fv
                })
                .sum::<f64>()
                * 6.0
                / (fine - 1) as f64;
            let m = p.values[i];
            let oracle = -f[i] + 1.2 * (1.0 - m * m) * conv;
            assert!((l[i] - oracle).abs() < 1e-6, "r = {r}: {} vs {oracle}", l[i]);
        }
    }

    #[test]
    fn inner_product_properties() {
        let (_, p) = setup();
        let dm = p.derivative();
        assert!(l2mu_inner(&dm, &dm, p).unwrap() > 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f = random_compact(p, &mut rng);
        let g = random_compact(p, &mut rng);
        let e = random_compact(p, &mut rng);
        let fg = l2mu_inner(&f, &g, p).unwrap();
        assert!((fg - l2mu_inner(&g, &f, p).unwrap()).abs() < 1e-14);
        let comb: Vec<f64> = f.iter().zip(&e).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let lhs = l2mu_inner(&comb, &g, p).unwrap();
        let rhs = 2.0 * fg - 3.0 * l2mu_inner(&e, &g, p).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        // m̄′ is even, so it is orthogonal to every odd function
        let odd: Vec<f64> = p.grid.nodes().iter().map(|&r| r * (-r * r).exp()).collect();
        assert!(l2mu_inner(&dm, &odd, p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn weight_blowup_is_detected() {
        let (_, p) = setup();
        let mut q = p.clone();
        q.values[10] = 1.0;
        let f = vec![1.0; q.values.len()];
        assert!(matches!(l2mu_inner(&f, &f, &q), Err(Error::WeightBlowup(_))));
    }

    #[test]
    fn linearized_operator_is_self_adjoint() {
        let (k, p) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let f = random_compact(p, &mut rng);
            let g = random_compact(p, &mut rng);
            let a = l2mu_inner(&apply_linearized(&f, p, k), &g, p).unwrap();
            let b = l2mu_inner(&f, &apply_linearized(&g, p, k), p).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn spectral_gap_is_positive() {
        let (k, p) = setup();
        let dm = p.derivative();
        let nd = l2mu_inner(&dm, &dm, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tau0 = f64::INFINITY;
        for _ in 0..50 {
            let mut f = random_compact(p, &mut rng);
            let c = l2mu_inner(&f, &dm, p).unwrap() / nd;
            f.iter_mut().zip(&dm).for_each(|(a, d)| *a -= c * d);
            let q = -l2mu_inner(&apply_linearized(&f, p, k), &f, p).unwrap() / l2mu_inner(&f, &f, p).unwrap();
            tau0 = tau0.min(q);
        }
        assert!(tau0 > 0.0, "{tau0}");
    }

    #[test]
    fn corrector_of_parallel_input_vanishes() {
        let (k, p) = setup();
        let dm = p.derivative();
        let c = solve_corrector(&dm, p, k).unwrap();
        assert!((c.parallel - 1.0).abs() < 1e-12);
        assert!(c.m1.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn corrector_recovers_a_manufactured_solution() {
        let (k, p) = setup();
        let dm = p.derivative();
        let nd = l2mu_inner(&dm, &dm, p).unwrap();
        let g = bump(p, 0.8, 2.0);
        let rhat = apply_linearized(&g, p, k);
        let c = solve_corrector(&rhat, p, k).unwrap();
        assert!(c.residual < 1e-6, "{}", c.residual);
        // g minus its m̄′ component
        let a = l2mu_inner(&g, &dm, p).unwrap() / nd;
        let err =
            c.m1.iter()
                .zip(&g)
                .zip(&dm)
                .map(|((m, gi), d)| (m - (gi - a * d)).abs())
                .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn corrector_is_gauge_fixed() {
        let (k, p) = setup();
        let dm = p.derivative();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_compact(p, &mut rng);
        let c = solve_corrector(&r, p, k).unwrap();
        assert!(l2mu_inner(&c.m1, &dm, p).unwrap().abs() < 1e-10);
    }
}
