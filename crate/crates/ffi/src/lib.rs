//! C ABI over `collapse-entanglement`.
//!
//! Every fallible call returns a [`CeStatus`] and writes its result through an
//! out-pointer. Objects cross the boundary as opaque handles that the caller
//! releases with the matching `*_free`. The message for the most recent
//! failure on the calling thread is available from [`ce_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use collapse_entanglement::entanglement::{
    closed_form_entropy, crossover, entropy_report, fitted_temperature_ratio, reduced_state,
};
use collapse_entanglement::{
    BlackHoleParams, DensityOperator, Error, ModeChannel, Sector, SqueezingParams, Statistics,
    Subsystem,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    SqueezingOverflow = 3,
    NoSignChange = 4,
    InvalidOperator = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeStatistics {
    Boson = 0,
    Fermion = 1,
}

impl From<CeStatistics> for Statistics {
    fn from(s: CeStatistics) -> Self {
        match s {
            CeStatistics::Boson => Statistics::Boson,
            CeStatistics::Fermion => Statistics::Fermion,
        }
    }
}

/// Per-mode entropy summary. `fitted_temperature_ratio` is NaN when no fit
/// is possible (reduced state numerically equal to the vacuum).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CeEntropyReport {
    pub x: f64,
    pub omega: f64,
    pub mass: f64,
    pub entropy_closed_form: f64,
    pub entropy_numerical: f64,
    pub abs_gap: f64,
    pub mean_occupation: f64,
    pub fitted_temperature_ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CeCrossover {
    pub x_star: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub residual: f64,
    pub iterations: u32,
    pub sign_changes: u32,
}

/// Opaque black-hole parameters.
pub struct CeBlackHole(BlackHoleParams);

/// Opaque reduced density operator of the `out` modes.
pub struct CeReducedState {
    rho: DensityOperator,
    x: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CeStatus {
    match e {
        Error::InvalidParameter(_) | Error::StatisticsMismatch { .. } | Error::Io(_) => {
            CeStatus::InvalidArgument
        }
        Error::SqueezingOverflow { .. } => CeStatus::SqueezingOverflow,
        Error::NoSignChange { .. } => CeStatus::NoSignChange,
        Error::InvalidOperator(_) => CeStatus::InvalidOperator,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CeStatus>) -> CeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CeStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside collapse-entanglement".into());
            CeStatus::Panic
        }
    }
}

fn lift<T>(r: collapse_entanglement::Result<T>) -> Result<T, CeStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, CeStatus> {
    if p.is_null() {
        set_error("null output pointer".into());
        return Err(CeStatus::NullPointer);
    }
    Ok(&mut *p)
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, CeStatus> {
    if p.is_null() {
        set_error("null handle".into());
        return Err(CeStatus::NullPointer);
    }
    Ok(&*p)
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ce_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ce_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ce_black_hole_new(mass: f64, v0: f64, out: *mut *mut CeBlackHole) -> CeStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let p = lift(BlackHoleParams::new(mass, v0))?;
        *out = Box::into_raw(Box::new(CeBlackHole(p)));
        Ok(())
    })
}

/// # Safety
/// `bh` must be NULL or a handle from [`ce_black_hole_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ce_black_hole_free(bh: *mut CeBlackHole) {
    if !bh.is_null() {
        drop(Box::from_raw(bh));
    }
}

/// Horizon location `v0 - 4m`.
///
/// # Safety
/// `bh` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_horizon_formation(bh: *const CeBlackHole, out: *mut f64) -> CeStatus {
    guard(|| {
        let bh = in_ref(bh)?;
        *out_ref(out)? = bh.0.horizon_formation();
        Ok(())
    })
}

/// Hawking temperature `1/(8πm)`.
///
/// # Safety
/// `bh` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_hawking_temperature(bh: *const CeBlackHole, out: *mut f64) -> CeStatus {
    guard(|| {
        let bh = in_ref(bh)?;
        *out_ref(out)? = bh.0.hawking_temperature();
        Ok(())
    })
}

/// Squeezing parameter `r` (boson) or `r̃` (fermion) for `x = 4πmω`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_squeezing_r(stats: CeStatistics, x: f64, out: *mut f64) -> CeStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = lift(SqueezingParams::from_x(stats.into(), x))?.r();
        Ok(())
    })
}

/// Closed-form entanglement entropy in bits at dimensionless `x > 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_closed_form_entropy(stats: CeStatistics, x: f64, out: *mut f64) -> CeStatus {
    guard(|| {
        let out = out_ref(out)?;
        lift(SqueezingParams::from_x(stats.into(), x))?;
        *out = closed_form_entropy(stats.into(), x);
        Ok(())
    })
}

/// Closed form plus truncated-Fock oracle for one mode.
///
/// # Safety
/// `bh` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_entropy_report(
    bh: *const CeBlackHole,
    omega: f64,
    stats: CeStatistics,
    eps_tail: f64,
    out: *mut CeEntropyReport,
) -> CeStatus {
    guard(|| {
        let bh = in_ref(bh)?;
        let out = out_ref(out)?;
        let c = lift(ModeChannel::new(omega, stats.into()))?;
        let r = lift(entropy_report(&bh.0, &c, eps_tail))?;
        *out = CeEntropyReport {
            x: r.x,
            omega: r.omega,
            mass: r.mass,
            entropy_closed_form: r.entropy_closed_form,
            entropy_numerical: r.entropy_numerical,
            abs_gap: r.abs_gap,
            mean_occupation: r.mean_occupation,
            fitted_temperature_ratio: r.fitted_temperature_ratio.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Boson/fermion crossover in `x` by bisection on `[lo, hi]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_crossover(tol: f64, lo: f64, hi: f64, out: *mut CeCrossover) -> CeStatus {
    guard(|| {
        let out = out_ref(out)?;
        let c = lift(crossover(tol, lo, hi))?;
        *out = CeCrossover {
            x_star: c.x_star,
            bracket_lo: c.bracket.0,
            bracket_hi: c.bracket.1,
            residual: c.residual,
            iterations: c.iterations,
            sign_changes: c.sign_changes as u32,
        };
        Ok(())
    })
}

/// Builds the mode's global state and traces out the horizon side.
///
/// # Safety
/// `bh` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_new(
    bh: *const CeBlackHole,
    omega: f64,
    stats: CeStatistics,
    eps_tail: f64,
    out: *mut *mut CeReducedState,
) -> CeStatus {
    guard(|| {
        let bh = in_ref(bh)?;
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let c = lift(ModeChannel::new(omega, stats.into()))?;
        let s = lift(collapse_entanglement::squeezing_for(&bh.0, &c))?;
        let rho = lift(reduced_state(&s, eps_tail, Subsystem::Out))?;
        *out = Box::into_raw(Box::new(CeReducedState { rho, x: s.x() }));
        Ok(())
    })
}

/// # Safety
/// `st` must be NULL or a handle from [`ce_reduced_state_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_free(st: *mut CeReducedState) {
    if !st.is_null() {
        drop(Box::from_raw(st));
    }
}

/// Dimension of the reduced state's basis.
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_dim(st: *const CeReducedState, out: *mut usize) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        *out_ref(out)? = st.rho.dim();
        Ok(())
    })
}

/// Copies the diagonal into `buf` (capacity `len`). Returns
/// `BufferTooSmall` if `len` is less than the dimension.
///
/// # Safety
/// `st` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_diagonal(
    st: *const CeReducedState,
    buf: *mut f64,
    len: usize,
) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        if buf.is_null() {
            set_error("null buffer".into());
            return Err(CeStatus::NullPointer);
        }
        let diag = st.rho.diagonal();
        if len < diag.len() {
            set_error(format!("buffer holds {len}, need {}", diag.len()));
            return Err(CeStatus::BufferTooSmall);
        }
        std::slice::from_raw_parts_mut(buf, diag.len()).copy_from_slice(&diag);
        Ok(())
    })
}

/// Von Neumann entropy in bits.
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_entropy(st: *const CeReducedState, out: *mut f64) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        let out = out_ref(out)?;
        *out = lift(st.rho.von_neumann_entropy())?;
        Ok(())
    })
}

/// `Tr(ρ²)`.
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_purity(st: *const CeReducedState, out: *mut f64) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        *out_ref(out)? = st.rho.purity();
        Ok(())
    })
}

/// Particle-sector mean occupation.
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_mean_occupation(st: *const CeReducedState, out: *mut f64) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        let out = out_ref(out)?;
        *out = lift(st.rho.mean_occupation(Sector::Particle))?;
        Ok(())
    })
}

/// Fitted temperature over the Hawking temperature; NaN if no fit is possible.
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_temperature_ratio(st: *const CeReducedState, out: *mut f64) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        let out = out_ref(out)?;
        *out = lift(fitted_temperature_ratio(&st.rho, st.x))?.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// JSON dump `{basis, diag, offdiag_norm}`. Release with [`ce_string_free`].
///
/// # Safety
/// `st` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ce_reduced_state_to_json(st: *const CeReducedState, out: *mut *mut c_char) -> CeStatus {
    guard(|| {
        let st = in_ref(st)?;
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let text = serde_json::to_string(&st.rho.to_json()).map_err(|e| {
            set_error(e.to_string());
            CeStatus::InvalidOperator
        })?;
        let c = CString::new(text).map_err(|_| CeStatus::InvalidArgument)?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ce_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
