//! C ABI over `kicked_spectra`.
//!
//! Operators and spectra cross the boundary as opaque heap handles that the
//! caller releases with the matching `*_free`. Every fallible call returns a
//! [`KsStatus`]; the message of the most recent failure on the calling thread
//! is available from [`ks_last_error_message`].

// Raw pointers are null-checked before use.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use kicked_spectra::floquet::{dkt_floquet, quasienergy_spectrum, DktParams};
use kicked_spectra::harper::{self, EffectiveMode, HarperParams};
use kicked_spectra::multifractal::{default_bin_grid, participation_ratio, tau_spectrum, ScalingConfig};
use kicked_spectra::su2::{self, SpinLabel, TableCase};
use kicked_spectra::{Error, HermitianOperator};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    DimensionMismatch = 3,
    Config = 4,
    Numerical = 5,
    Invariant = 6,
    Io = 7,
    Panic = 8,
}

/// Opaque Hermitian operator.
pub struct KsOperator {
    inner: HermitianOperator,
}

/// Opaque ascending list of reals (energies or quasienergies).
pub struct KsSpectrum {
    values: Vec<f64>,
}

/// Effective-Hamiltonian construction used by [`ks_kicked_harper_effective`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsHarperMode {
    ClosedForm = 0,
    General = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KsStatus {
    match e {
        Error::Domain(_) => KsStatus::Domain,
        Error::DimensionMismatch { .. } => KsStatus::DimensionMismatch,
        Error::Config(_) => KsStatus::Config,
        Error::Numerical(_) => KsStatus::Numerical,
        Error::Invariant(_) => KsStatus::Invariant,
        Error::Io(_) => KsStatus::Io,
    }
}

fn fail(status: KsStatus, msg: impl Into<String>) -> KsStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f` with panics and library errors mapped to status codes.
fn guard(f: impl FnOnce() -> Result<(), KsStatus>) -> KsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KsStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(KsStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lib<T>(r: kicked_spectra::Result<T>) -> Result<T, KsStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn out_ptr<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, KsStatus> {
    if out.is_null() {
        return Err(fail(KsStatus::NullPointer, "null output pointer"));
    }
    // SAFETY: non-null, and the caller guarantees it points to writable storage.
    let slot = unsafe { &mut *out };
    *slot = ptr::null_mut();
    Ok(slot)
}

fn input<'a, T>(data: *const T, len: usize) -> Result<&'a [T], KsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(KsStatus::NullPointer, "null input array"));
    }
    // SAFETY: the caller guarantees `len` readable elements at `data`.
    Ok(unsafe { slice::from_raw_parts(data, len) })
}

fn operator<'a>(op: *const KsOperator) -> Result<&'a KsOperator, KsStatus> {
    // SAFETY: handles only come from Box::into_raw in this crate.
    unsafe { op.as_ref() }.ok_or_else(|| fail(KsStatus::NullPointer, "null operator handle"))
}

fn spin(twice_j: u32) -> Result<SpinLabel, KsStatus> {
    if twice_j == 0 {
        return Err(fail(KsStatus::Domain, "spin j must be positive"));
    }
    Ok(SpinLabel::from_twice(twice_j))
}

fn emit_operator(out: *mut *mut KsOperator, build: impl FnOnce() -> Result<HermitianOperator, KsStatus>) -> KsStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        *slot = Box::into_raw(Box::new(KsOperator { inner: build()? }));
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `(sqrt(5) - 1) / 2`.
#[no_mangle]
pub extern "C" fn ks_golden_ratio() -> f64 {
    kicked_spectra::GOLDEN_RATIO
}

/// Effective Hamiltonian of the double kicked top; spin given as `2j`.
#[no_mangle]
pub extern "C" fn ks_dkt_effective(
    twice_j: u32,
    alpha: f64,
    eta: f64,
    period: f64,
    out: *mut *mut KsOperator,
) -> KsStatus {
    emit_operator(out, || lib(DktParams { alpha, eta, spin: spin(twice_j)?, period }.effective_hamiltonian()))
}

/// One of the six SU(2) family cases, `case_label` in `'a'..='f'`.
/// `epsilon` is read only when `has_epsilon` is true and is required for case `'e'`.
#[no_mangle]
pub extern "C" fn ks_su2_family(
    twice_j: u32,
    case_label: c_char,
    alpha: f64,
    eta: f64,
    epsilon: f64,
    has_epsilon: bool,
    out: *mut *mut KsOperator,
) -> KsStatus {
    emit_operator(out, || {
        let s = spin(twice_j)?;
        lib((case_label as u8 as char)
            .to_string()
            .parse::<TableCase>()
            .and_then(|c| c.params(s, alpha, eta, has_epsilon.then_some(epsilon)))
            .and_then(|p| su2::general_su2_hamiltonian(&p)))
    })
}

/// Static open Harper chain of `length` sites.
#[no_mangle]
pub extern "C" fn ks_harper(length: usize, sigma: f64, out: *mut *mut KsOperator) -> KsStatus {
    emit_operator(out, || lib(harper::harper_hamiltonian(&HarperParams::new(length, sigma))))
}

/// Kicked-Harper effective Hamiltonian on an open chain.
#[no_mangle]
pub extern "C" fn ks_kicked_harper_effective(
    length: usize,
    sigma: f64,
    alpha: f64,
    period: f64,
    mode: KsHarperMode,
    out: *mut *mut KsOperator,
) -> KsStatus {
    let p = HarperParams { alpha, period, ..HarperParams::new(length, sigma) };
    let mode = match mode {
        KsHarperMode::ClosedForm => EffectiveMode::ClosedForm,
        KsHarperMode::General => EffectiveMode::General,
    };
    emit_operator(out, || lib(harper::kicked_harper_effective(&p, mode)))
}

/// Matrix dimension, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn ks_operator_dim(op: *const KsOperator) -> usize {
    // SAFETY: see `operator`.
    unsafe { op.as_ref() }.map_or(0, |o| o.inner.dim())
}

/// Reads entry `(row, col)`.
#[no_mangle]
pub extern "C" fn ks_operator_get(
    op: *const KsOperator,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> KsStatus {
    guard(|| {
        let o = operator(op)?;
        if re.is_null() || im.is_null() {
            return Err(fail(KsStatus::NullPointer, "null output pointer"));
        }
        let d = o.inner.dim();
        if row >= d || col >= d {
            return Err(fail(KsStatus::Domain, format!("index ({row}, {col}) outside dimension {d}")));
        }
        let z = o.inner.matrix()[(row, col)];
        // SAFETY: both checked non-null above.
        unsafe {
            *re = z.re;
            *im = z.im;
        }
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn ks_operator_free(op: *mut KsOperator) {
    if !op.is_null() {
        // SAFETY: produced by Box::into_raw here and not freed before.
        drop(unsafe { Box::from_raw(op) });
    }
}

fn emit_spectrum(out: *mut *mut KsSpectrum, values: impl FnOnce() -> Result<Vec<f64>, KsStatus>) -> KsStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        *slot = Box::into_raw(Box::new(KsSpectrum { values: values()? }));
        Ok(())
    })
}

/// Ascending eigenvalues of an operator.
#[no_mangle]
pub extern "C" fn ks_operator_eigenvalues(op: *const KsOperator, out: *mut *mut KsSpectrum) -> KsStatus {
    emit_spectrum(out, || lib(operator(op)?.inner.eigenvalues()))
}

/// Ascending quasienergies in `(-pi, pi]` of the exact double-kicked-top Floquet operator.
#[no_mangle]
pub extern "C" fn ks_dkt_quasienergies(twice_j: u32, alpha: f64, eta: f64, out: *mut *mut KsSpectrum) -> KsStatus {
    emit_spectrum(out, || {
        let u = lib(dkt_floquet(alpha, eta, spin(twice_j)?))?;
        Ok(lib(quasienergy_spectrum(&u))?.phases)
    })
}

#[no_mangle]
pub extern "C" fn ks_spectrum_len(s: *const KsSpectrum) -> usize {
    // SAFETY: handles only come from Box::into_raw in this crate.
    unsafe { s.as_ref() }.map_or(0, |s| s.values.len())
}

/// Borrowed pointer to `ks_spectrum_len` values; valid until the handle is freed.
#[no_mangle]
pub extern "C" fn ks_spectrum_values(s: *const KsSpectrum) -> *const f64 {
    // SAFETY: as above.
    unsafe { s.as_ref() }.map_or(ptr::null(), |s| s.values.as_ptr())
}

#[no_mangle]
pub extern "C" fn ks_spectrum_free(s: *mut KsSpectrum) {
    if !s.is_null() {
        // SAFETY: produced by Box::into_raw here and not freed before.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Box-counting `tau_q` of `values` with the default bin grid. Writes `nq`
/// entries to `tau_out` and `dq_out` (`NaN` at `q = 1`) and the slope over
/// `q in [2, 8]` to `mu_out` (`NaN` if undefined). Any output may be null.
#[no_mangle]
pub extern "C" fn ks_tau_spectrum(
    values: *const f64,
    n: usize,
    q: *const f64,
    nq: usize,
    tau_out: *mut f64,
    dq_out: *mut f64,
    mu_out: *mut f64,
) -> KsStatus {
    guard(|| {
        let v = input(values, n)?;
        let q = input(q, nq)?;
        let cfg = ScalingConfig::new(q.to_vec(), default_bin_grid(n));
        let s = lib(tau_spectrum(v, &cfg))?;
        for (i, (t, d)) in s.tau.iter().zip(&s.dq).enumerate() {
            // SAFETY: the caller provides `nq` writable slots for each non-null output.
            unsafe {
                if !tau_out.is_null() {
                    *tau_out.add(i) = *t;
                }
                if !dq_out.is_null() {
                    *dq_out.add(i) = d.unwrap_or(f64::NAN);
                }
            }
        }
        if !mu_out.is_null() {
            // SAFETY: non-null, caller-owned.
            unsafe { *mu_out = s.mu.unwrap_or(f64::NAN) };
        }
        Ok(())
    })
}

/// `1 / sum w^2` for weights summing to one.
#[no_mangle]
pub extern "C" fn ks_participation_ratio(weights: *const f64, n: usize, out: *mut f64) -> KsStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(KsStatus::NullPointer, "null output pointer"));
        }
        let pr = lib(participation_ratio(input(weights, n)?))?;
        // SAFETY: checked non-null.
        unsafe { *out = pr };
        Ok(())
    })
}
