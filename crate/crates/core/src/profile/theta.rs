use rayon::prelude::*;

use super::{l2mu_inner, InstantonProfile};
use crate::error::Result;
use crate::kernel::KernelMarginals;

/// Mobility of the limiting flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobility {
    pub theta: f64,
    /// `N = ∫ m̄′² / (1 − m̄²) dr`.
    pub norm: f64,
    /// Phase spacing used for `r` and `r1`.
    pub spacing: f64,
    /// Trapezoid nodes for the transverse variable.
    pub moment_nodes: usize,
}

/// `θ = (β / 2N) ∫∫∫ m̄′(r) m̄′(r + r1) Ĵ(r1² + s²) s² dr dr1 ds`.
///
/// `r` and `r1` run over the phase grid; the `s` integral is the second
/// moment of `Ĵ` across the normal, taken with `moment_nodes` trapezoid
/// points. With this normalization the heat kernel gives `θ = 1`, the
/// coefficient of `Δ_H` itself.
pub fn compute_theta(
    kernel: &dyn KernelMarginals,
    profile: &InstantonProfile,
    moment_nodes: usize,
) -> Result<Mobility> {
    let dm = profile.derivative();
    let norm = l2mu_inner(&dm, &dm, profile)?;
    let h = profile.grid.spacing();
    let kk = (kernel.horizontal_radius() / h).floor() as isize;
    let moments: Vec<f64> = (-kk..=kk)
        .map(|k| kernel.hat_second_moment(k as f64 * h, moment_nodes))
        .collect();
    let n = dm.len() as isize;
    // fixed-order reduction: per-row sums are collected, then added sequentially
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for (o, &k) in moments.iter().enumerate() {
                let j = i + o as isize - kk;
                if j >= 0 && j < n {
                    acc += k * dm[j as usize];
                }
            }
            dm[i as usize] * acc
        })
        .collect();
    let integral: f64 = rows.iter().sum::<f64>() * h * h;
    Ok(Mobility {
        theta: profile.beta * integral / (2.0 * norm),
        norm,
        spacing: h,
        moment_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{BumpKernel, HeatMarginals};
    use crate::profile::{compute_instanton, InstantonOptions, LineKernel, Phase1DGrid};

    fn theta_for(kernel: &dyn KernelMarginals, grid: Phase1DGrid, nodes: usize) -> Mobility {
        let k = LineKernel::sample(kernel, grid.spacing()).unwrap();
        let p = compute_instanton(
            &k,
            1.2,
            grid,
            InstantonOptions {
                tol: 1e-12,
                ..Default::default()
            },
        )
        .unwrap();
        compute_theta(kernel, &p, nodes).unwrap()
    }

    #[test]
    fn heat_kernel_has_unit_mobility() {
        let m = theta_for(
            &HeatMarginals { tau: 1.0 },
            Phase1DGrid::with_spacing(30.0, 0.05).unwrap(),
            201,
        );
        assert!((m.theta - 1.0).abs() < 1e-3, "{}", m.theta);
    }

    #[test]
    fn bump_mobility_converges_under_refinement() {
        let k = BumpKernel::new(3.0).unwrap();
        let coarse = theta_for(&k, Phase1DGrid::default(), 129);
        let fine = theta_for(&k, Phase1DGrid::default().refined(), 257);
        assert!(coarse.theta > 0.0 && coarse.norm > 0.0);
        assert!(
            ((coarse.theta - fine.theta) / fine.theta).abs() < 1e-4,
            "{} vs {}",
            coarse.theta,
            fine.theta
        );
        println!("bump s = 3: theta = {:.8}, {:.8}", coarse.theta, fine.theta);
    }
}
