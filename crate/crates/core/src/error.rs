use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid index ({0}, {1}, {2}) is outside the grid")]
    IndexOutOfRange(isize, isize, isize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("characteristic point: |horizontal gradient| = {norm:e} <= tolerance {tol:e}")]
    CharacteristicPoint { norm: f64, tol: f64 },

    #[error("operation requires an analytic kernel, got the heat semigroup")]
    KernelKindMismatch,

    #[error("kernel support spans {cells:.2} cells along axis {axis}, at least 3 are required")]
    SupportUnresolved { axis: usize, cells: f64 },

    #[error("heat substep {dt:e} exceeds the stability bound {bound:e}")]
    StabilityViolation { dt: f64, bound: f64 },

    #[error("no triple root for beta = {beta}, a = {a}; single root {root}")]
    NoTripleRoot { beta: f64, a: f64, root: f64 },

    #[error("fixed-point iteration did not converge after {iterations} sweeps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("L2(mu) weight 1 - m^2 = {0:e} is too small")]
    WeightBlowup(f64),

    #[error("corrector equation not solvable: projected residual {0:e}")]
    SolvabilityViolated(f64),

    #[error("initial profile width eps = {eps} is below twice the horizontal spacing {spacing}")]
    ResolutionTooCoarse { eps: f64, spacing: f64 },

    #[error("comparison bracket violated by {0:e} at step {1}")]
    BracketViolated(f64, usize),

    #[error("point outside the canonical chart: |d theta| = {0} >= pi")]
    OutsideChart(f64),

    #[error("interpolation target ({0}, {1}) leaves the planar box")]
    InterpolationOutOfDomain(f64, f64),

    #[error("exact solution is extinct at t = {t} (extinction time {extinction})")]
    Extinct { t: f64, extinction: f64 },

    #[error("field has no zero level set in the requested slice")]
    NoZeroSet,

    #[error("curve is empty")]
    EmptyCurve,

    #[error("regression needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
