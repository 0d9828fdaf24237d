//! C ABI for the heisenflow library.
//!
//! Every function returns an [`HfStatus`]; results go through out-pointers.
//! Objects are opaque handles created by `hf_*_new` functions and released
//! with the matching `hf_*_free`. After a failure, `hf_last_error_message`
//! describes the error raised on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heisenflow::engine::{evolve, init_levelset_field, interface_radius, EvolutionParams, Shape};
use heisenflow::geometry::{ScalarField, UniformGrid3};
use heisenflow::kernel::KernelSpec;
use heisenflow::profile::{compute_theta, equilibria, InstantonProfile};
use heisenflow::se2::{se2_exp, se2_log, AlgebraCoords, SE2Point};
use heisenflow::validation::instanton_for_kernel;
use heisenflow::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidGrid = 3,
    KernelKindMismatch = 4,
    SupportUnresolved = 5,
    StabilityViolation = 6,
    NoTripleRoot = 7,
    NonConvergence = 8,
    WeightBlowup = 9,
    SolvabilityViolated = 10,
    ResolutionTooCoarse = 11,
    BracketViolated = 12,
    OutsideChart = 13,
    InterpolationOutOfDomain = 14,
    Extinct = 15,
    NoZeroSet = 16,
    EmptyCurve = 17,
    TooFewSamples = 18,
    Config = 19,
    Io = 20,
    BufferTooSmall = 21,
    IndexOutOfRange = 22,
    CharacteristicPoint = 23,
    Panic = 99,
}

impl From<&Error> for HfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::IndexOutOfRange(..) => HfStatus::IndexOutOfRange,
            Error::InvalidGrid(_) => HfStatus::InvalidGrid,
            Error::InvalidParameter(_) => HfStatus::InvalidParameter,
            Error::CharacteristicPoint { .. } => HfStatus::CharacteristicPoint,
            Error::KernelKindMismatch => HfStatus::KernelKindMismatch,
            Error::SupportUnresolved { .. } => HfStatus::SupportUnresolved,
            Error::StabilityViolation { .. } => HfStatus::StabilityViolation,
            Error::NoTripleRoot { .. } => HfStatus::NoTripleRoot,
            Error::NonConvergence { .. } => HfStatus::NonConvergence,
            Error::WeightBlowup(_) => HfStatus::WeightBlowup,
            Error::SolvabilityViolated(_) => HfStatus::SolvabilityViolated,
            Error::ResolutionTooCoarse { .. } => HfStatus::ResolutionTooCoarse,
            Error::BracketViolated(..) => HfStatus::BracketViolated,
            Error::OutsideChart(_) => HfStatus::OutsideChart,
            Error::InterpolationOutOfDomain(..) => HfStatus::InterpolationOutOfDomain,
            Error::Extinct { .. } => HfStatus::Extinct,
            Error::NoZeroSet => HfStatus::NoZeroSet,
            Error::EmptyCurve => HfStatus::EmptyCurve,
            Error::TooFewSamples { .. } => HfStatus::TooFewSamples,
            Error::Config(_) => HfStatus::Config,
            Error::Io(_) => HfStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), (HfStatus, String)>) -> HfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HfStatus::Ok,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            HfStatus::Panic
        }
    }
}

fn lib(e: Error) -> (HfStatus, String) {
    (HfStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (HfStatus, String) {
    (HfStatus::NullPointer, format!("{what} is null"))
}

/// Smoother selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfKernelKind {
    /// Heat semigroup for time `eps²`.
    Heat = 0,
    /// Compactly supported bump kernel with support parameter `support`.
    Bump = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfKernel {
    pub kind: HfKernelKind,
    pub support: f64,
}

fn kernel_spec(k: HfKernel) -> Result<KernelSpec, (HfStatus, String)> {
    match k.kind {
        HfKernelKind::Heat => Ok(KernelSpec::heat(1.0)),
        HfKernelKind::Bump => KernelSpec::bump(k.support).map_err(lib),
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfEquilibria {
    pub m_minus: f64,
    pub m_zero: f64,
    pub m_plus: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfParams {
    pub beta: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    pub forcing: f64,
    pub kernel: HfKernel,
}

/// Box `[−half[a], half[a]]` with `dims[a]` nodes per axis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfGrid {
    pub half: [f64; 3],
    pub dims: [usize; 3],
}

/// Opaque instanton profile together with the kernel it was computed for.
pub struct HfProfile {
    profile: InstantonProfile,
    kernel: KernelSpec,
}

/// Opaque 3-D field.
pub struct HfField {
    field: ScalarField,
}

/// NUL-terminated library version; the pointer stays valid forever.
#[no_mangle]
pub extern "C" fn hf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`), and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map(|c| c.as_bytes()).unwrap_or(b"");
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// The three constant solutions of `m = tanh(β(m + a))`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_equilibria(beta: f64, a: f64, out: *mut HfEquilibria) -> HfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = equilibria(beta, a).map_err(lib)?;
        *out = HfEquilibria {
            m_minus: e.m_minus,
            m_zero: e.m_zero,
            m_plus: e.m_plus,
        };
        Ok(())
    })
}

/// Computes the instanton for `kernel` at `beta`.
///
/// # Safety
/// `out` must be null or valid for writes. The handle written there must be
/// released with [`hf_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn hf_profile_new(kernel: HfKernel, beta: f64, out: *mut *mut HfProfile) -> HfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let spec = kernel_spec(kernel)?;
        let (profile, _) = instanton_for_kernel(&spec, beta).map_err(lib)?;
        *out = Box::into_raw(Box::new(HfProfile { profile, kernel: spec }));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`hf_profile_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_profile_free(p: *mut HfProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of nodes of the profile grid.
///
/// # Safety
/// `p` must be null or a live profile handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_profile_len(p: *const HfProfile, out: *mut usize) -> HfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = p.profile.values.len();
        Ok(())
    })
}

/// Copies the nodes `r` and values `m̄(r)` into two buffers of `len` entries.
///
/// # Safety
/// `p` must be a live profile handle; `r` and `m` must each be null or point
/// to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hf_profile_copy(p: *const HfProfile, r: *mut f64, m: *mut f64, len: usize) -> HfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let n = p.profile.values.len();
        if len < n {
            return Err((
                HfStatus::BufferTooSmall,
                format!("buffer holds {len} values, {n} needed"),
            ));
        }
        if !r.is_null() {
            let nodes = p.profile.grid.nodes();
            ptr::copy_nonoverlapping(nodes.as_ptr(), r, n);
        }
        if !m.is_null() {
            ptr::copy_nonoverlapping(p.profile.values.as_ptr(), m, n);
        }
        Ok(())
    })
}

/// Positive stable state `m_β` and the exit residual of the profile.
///
/// # Safety
/// `p` must be a live profile handle; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_profile_info(p: *const HfProfile, m_beta: *mut f64, residual: *mut f64) -> HfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        if let Some(o) = m_beta.as_mut() {
            *o = p.profile.m_beta;
        }
        if let Some(o) = residual.as_mut() {
            *o = p.profile.residual;
        }
        Ok(())
    })
}

/// Mobility `θ` by quadrature with `moment_nodes` nodes per moment integral.
///
/// # Safety
/// `p` must be a live profile handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_theta(p: *const HfProfile, moment_nodes: usize, out: *mut f64) -> HfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let marg = p.kernel.marginals();
        *out = compute_theta(marg.as_ref(), &p.profile, moment_nodes)
            .map_err(lib)?
            .theta;
        Ok(())
    })
}

/// Initial field `m̄((‖x‖ − radius)/eps)` of a gauge ball.
///
/// # Safety
/// `p` must be a live profile handle; `out` null or writable. The handle
/// written there must be released with [`hf_field_free`].
#[no_mangle]
pub unsafe extern "C" fn hf_field_new_ball(
    p: *const HfProfile,
    grid: HfGrid,
    radius: f64,
    eps: f64,
    out: *mut *mut HfField,
) -> HfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let g = UniformGrid3::centered(grid.half, grid.dims).map_err(lib)?;
        let field = init_levelset_field(Shape::GaugeBall { radius }, eps, &p.profile, &g).map_err(lib)?;
        *out = Box::into_raw(Box::new(HfField { field }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a field handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_field_free(f: *mut HfField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of nodes of the field.
///
/// # Safety
/// `f` must be a live field handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_field_len(f: *const HfField, out: *mut usize) -> HfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("field"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = f.field.values.len();
        Ok(())
    })
}

/// Copies the values, row-major with axis 3 fastest.
///
/// # Safety
/// `f` must be a live field handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hf_field_copy(f: *const HfField, buf: *mut f64, len: usize) -> HfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("field"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let n = f.field.values.len();
        if len < n {
            return Err((
                HfStatus::BufferTooSmall,
                format!("buffer holds {len} values, {n} needed"),
            ));
        }
        ptr::copy_nonoverlapping(f.field.values.as_ptr(), buf, n);
        Ok(())
    })
}

/// Zero crossing along the positive `x1`-axis, or NaN if there is none.
///
/// # Safety
/// `f` must be a live field handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_field_interface_radius(f: *const HfField, out: *mut f64) -> HfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("field"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = interface_radius(&f.field).unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Runs the scheme from `f` to `params.t_end` and returns the final field.
///
/// # Safety
/// `f` must be a live field handle; `out` null or writable. The handle
/// written there must be released with [`hf_field_free`].
#[no_mangle]
pub unsafe extern "C" fn hf_evolve(f: *const HfField, params: HfParams, out: *mut *mut HfField) -> HfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("field"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = EvolutionParams::new(
            params.beta,
            params.eps,
            params.dt,
            params.t_end,
            kernel_spec(params.kernel)?,
        )
        .map_err(lib)?
        .with_forcing(params.forcing);
        let t_last = p.steps() as f64 * p.dt;
        let tr = evolve(&f.field, &p, &[t_last]).map_err(lib)?;
        let field = tr
            .snapshots
            .into_iter()
            .next_back()
            .ok_or_else(|| lib(Error::NoZeroSet))?;
        *out = Box::into_raw(Box::new(HfField { field }));
        Ok(())
    })
}

/// Point `(x1, x2, θ)` of SE(2).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfSe2Point {
    pub x1: f64,
    pub x2: f64,
    pub theta: f64,
}

/// Coefficients of `a1 Y₁ + a2 Y₂ + a3 Y₃`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfSe2Coords {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Time-one flow of `a` on SE(2) from `x0`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_se2_exp(x0: HfSe2Point, a: HfSe2Coords, out: *mut HfSe2Point) -> HfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let y = se2_exp(
            SE2Point::new(x0.x1, x0.x2, x0.theta),
            AlgebraCoords::new(a.a1, a.a2, a.a3),
        );
        *out = HfSe2Point {
            x1: y.x1,
            x2: y.x2,
            theta: y.theta,
        };
        Ok(())
    })
}

/// Canonical coordinates of `y` around `x0`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_se2_log(x0: HfSe2Point, y: HfSe2Point, out: *mut HfSe2Coords) -> HfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let a = se2_log(
            SE2Point::new(x0.x1, x0.x2, x0.theta),
            SE2Point::new(y.x1, y.x2, y.theta),
        )
        .map_err(lib)?;
        *out = HfSe2Coords {
            a1: a.a1,
            a2: a.a2,
            a3: a.a3,
        };
        Ok(())
    })
}
