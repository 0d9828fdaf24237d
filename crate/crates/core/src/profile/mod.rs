//! One-dimensional phase machinery: the equilibria of the mean-field
//! equation, the instanton `m̄`, its linearization `𝓛`, the weighted inner
//! product of `L²(μ)` with `dμ = dr/(1 − m̄²)`, and the mobility `θ`.

mod equilibria;
mod instanton;
mod linear;
mod theta;

pub use equilibria::{equilibria, triple_root_threshold, Equilibria};
pub use instanton::{compute_instanton, compute_instanton_from, InstantonOptions, InstantonProfile, LineKernel};
pub use linear::{apply_linearized, l2mu_inner, solve_corrector, Corrector, MIN_WEIGHT};
pub use theta::{compute_theta, Mobility};

use crate::error::{Error, Result};

/// Uniform grid on `[−r_max, r_max]` with an odd number of nodes, so that
/// `r = 0` is the middle node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase1DGrid {
    pub r_max: f64,
    pub n: usize,
}

impl Phase1DGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "phase grid needs an odd node count >= 5, got {n}"
            )));
        }
        Ok(Phase1DGrid { r_max, n })
    }

    /// Grid on `[−r_max, r_max]` with spacing as close to `h` as an odd count allows.
    pub fn with_spacing(r_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let half = (r_max / h).round() as usize;
        Phase1DGrid::new(r_max, 2 * half + 1)
    }

    pub fn r_min(&self) -> f64 {
        -self.r_max
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.r_max / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // symmetric evaluation keeps r(i) = −r(n−1−i) exactly
        let mid = (self.n / 2) as f64;
        (i as f64 - mid) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Spacing `0.05` on `[−r_max, r_max]`, `r_max = 20` unless the kernel is
    /// too wide for it, then the next multiple of 5 above `2.2` support radii.
    pub fn for_kernel(kernel: &dyn crate::kernel::KernelMarginals) -> Phase1DGrid {
        let need = 2.2 * kernel.horizontal_radius();
        let r_max = if need <= 20.0 { 20.0 } else { 5.0 * (need / 5.0).ceil() };
        Phase1DGrid {
            r_max,
            n: 2 * (r_max / 0.05).round() as usize + 1,
        }
    }

    /// Same interval, spacing halved.
    pub fn refined(&self) -> Phase1DGrid {
        Phase1DGrid {
            r_max: self.r_max,
            n: 2 * self.n - 1,
        }
    }
}

impl Default for Phase1DGrid {
    fn default() -> Self {
        Phase1DGrid { r_max: 20.0, n: 801 }
    }
}
