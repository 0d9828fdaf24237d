use super::{equilibria, Phase1DGrid};
use crate::error::{Error, Result};
use crate::kernel::KernelMarginals;

/// `J̄` sampled at the grid offsets `k h`, `|k| ≤ K`, normalized to unit
/// discrete mass so that constants are exact fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct LineKernel {
    pub spacing: f64,
    /// `weights[K + k] ≈ J̄(k h) h`.
    pub weights: Vec<f64>,
}

impl LineKernel {
    pub fn sample(kernel: &dyn KernelMarginals, h: f64) -> Result<Self> {
        let big_k = (kernel.horizontal_radius() / h).floor() as isize;
        if big_k < 2 {
            return Err(Error::InvalidParameter(format!(
                "phase spacing {h} does not resolve a kernel of radius {}",
                kernel.horizontal_radius()
            )));
        }
        let mut weights: Vec<f64> = (-big_k..=big_k).map(|k| kernel.bar(k as f64 * h) * h).collect();
        // enforce exact evenness before normalizing
        let n = weights.len();
        for k in 0..n / 2 {
            let avg = 0.5 * (weights[k] + weights[n - 1 - k]);
            weights[k] = avg;
            weights[n - 1 - k] = avg;
        }
        let mass: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= mass);
        Ok(LineKernel { spacing: h, weights })
    }

    pub fn half_width(&self) -> usize {
        self.weights.len() / 2
    }

    /// `(J̄ ∗ f)_i = Σ_k w_k f_{i+k}` with `f = low` left of the grid and `high` right of it.
    pub fn convolve(&self, f: &[f64], low: f64, high: f64) -> Vec<f64> {
        let n = f.len() as isize;
        let kk = self.half_width() as isize;
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for (o, &w) in self.weights.iter().enumerate() {
                    let j = i + o as isize - kk;
                    let v = if j < 0 {
                        low
                    } else if j >= n {
                        high
                    } else {
                        f[j as usize]
                    };
                    acc += w * v;
                }
                acc
            })
            .collect()
    }

    /// Second moment `Σ w_k (k h)²`.
    pub fn second_moment(&self) -> f64 {
        let kk = self.half_width() as f64;
        self.weights
            .iter()
            .enumerate()
            .map(|(o, w)| {
                let r = (o as f64 - kk) * self.spacing;
                w * r * r
            })
            .sum()
    }
}

/// The standing wave `m̄` of `m = tanh(β J̄ ∗ m)` connecting `−m_β` to `m_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstantonProfile {
    pub grid: Phase1DGrid,
    pub values: Vec<f64>,
    pub beta: f64,
    pub m_beta: f64,
    /// Sup-norm of `−m̄ + tanh(β J̄ ∗ m̄)` at exit.
    pub residual: f64,
    pub iterations: usize,
}

impl InstantonProfile {
    /// `m̄′` by fourth-order centred differences, lower order at the two
    /// outermost nodes on each side where the profile is flat anyway.
    pub fn derivative(&self) -> Vec<f64> {
        let n = self.values.len();
        let h = self.grid.spacing();
        let v = &self.values;
        (0..n)
            .map(|i| {
                if i == 0 {
                    (v[1] - v[0]) / h
                } else if i == n - 1 {
                    (v[n - 1] - v[n - 2]) / h
                } else if i == 1 || i == n - 2 {
                    (v[i + 1] - v[i - 1]) / (2.0 * h)
                } else {
                    (8.0 * (v[i + 1] - v[i - 1]) - (v[i + 2] - v[i - 2])) / (12.0 * h)
                }
            })
            .collect()
    }

    /// `m̄(r)` by linear interpolation, `±m_β` outside the grid.
    pub fn eval(&self, r: f64) -> f64 {
        let g = &self.grid;
        if r <= g.r_min() {
            return if r < g.r_min() { -self.m_beta } else { self.values[0] };
        }
        if r >= g.r_max {
            return if r > g.r_max { self.m_beta } else { self.values[g.n - 1] };
        }
        let s = (r - g.r_min()) / g.spacing();
        let i = (s.floor() as usize).min(g.n - 2);
        let t = s - i as f64;
        (1.0 - t) * self.values[i] + t * self.values[i + 1]
    }

    /// One undamped sweep `tanh(β J̄ ∗ m̄)`.
    pub fn fixed_point_map(&self, kernel: &LineKernel) -> Vec<f64> {
        kernel
            .convolve(&self.values, -self.m_beta, self.m_beta)
            .into_iter()
            .map(|c| (self.beta * c).tanh())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantonOptions {
    /// Damping `ω` of `m ← (1−ω) m + ω tanh(β J̄ ∗ m)`.
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for InstantonOptions {
    fn default() -> Self {
        InstantonOptions {
            damping: 0.5,
            tol: 1e-8,
            max_iter: 100_000,
        }
    }
}

/// Instanton by damped fixed-point iteration from `m_β tanh(r)`.
pub fn compute_instanton(
    kernel: &LineKernel,
    beta: f64,
    grid: Phase1DGrid,
    opts: InstantonOptions,
) -> Result<InstantonProfile> {
    let m_beta = equilibria(beta, 0.0)?.m_plus;
    let init: Vec<f64> = grid.nodes().iter().map(|&r| m_beta * r.tanh()).collect();
    compute_instanton_from(kernel, beta, grid, init, opts)
}

/// As [`compute_instanton`], from a caller-supplied initial profile.
pub fn compute_instanton_from(
    kernel: &LineKernel,
    beta: f64,
    grid: Phase1DGrid,
    init: Vec<f64>,
    opts: InstantonOptions,
) -> Result<InstantonProfile> {
    let m_beta = equilibria(beta, 0.0)?.m_plus;
    let h = grid.spacing();
    if (kernel.spacing - h).abs() > 1e-12 * h {
        return Err(Error::InvalidParameter(format!(
            "line kernel spacing {} differs from grid spacing {h}",
            kernel.spacing
        )));
    }
    if init.len() != grid.n {
        return Err(Error::InvalidParameter(
            "initial profile length differs from the grid".into(),
        ));
    }
    if 2 * kernel.half_width() > grid.n / 2 {
        return Err(Error::InvalidGrid(
            "phase grid is too short for the kernel support".into(),
        ));
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "damping must lie in (0, 1], got {}",
            opts.damping
        )));
    }
    let mut prof = InstantonProfile {
        grid,
        values: init,
        beta,
        m_beta,
        residual: f64::INFINITY,
        iterations: 0,
    };
    symmetrize(&mut prof.values, m_beta);
    let w = opts.damping;
    for it in 0..opts.max_iter {
        let next = prof.fixed_point_map(kernel);
        prof.residual = next
            .iter()
            .zip(&prof.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prof.iterations = it;
        if prof.residual < opts.tol {
            return Ok(prof);
        }
        for (m, t) in prof.values.iter_mut().zip(&next) {
            *m = (1.0 - w) * *m + w * t;
        }
        symmetrize(&mut prof.values, m_beta);
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: prof.residual,
    })
}

/// Odd part, exact zero at the centre, and values clamped into `[−m_β, m_β]`.
fn symmetrize(v: &mut [f64], m_beta: f64) {
    let n = v.len();
    for i in 0..n / 2 {
        let odd = 0.5 * (v[n - 1 - i] - v[i]);
        let odd = odd.clamp(-m_beta, m_beta);
        v[i] = -odd;
        v[n - 1 - i] = odd;
    }
    v[n / 2] = 0.0;
}
