//! C ABI for the mzpovm library.
//!
//! POVMs are returned as opaque `MzpPovm` handles released with
//! `mzp_povm_free`. Every fallible call returns an `MzpStatus`; on failure a
//! message is available from `mzp_last_error` on the same thread. Strings
//! handed out by `mzp_run_report` are released with `mzp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mzpovm::extraction::{closed_form, extract_povm, scheme_for};
use mzpovm::interferometer::{Experiment, MzConfig};
use mzpovm::povm::{DiscretePovm, PovmKind};
use mzpovm::qubit::{StateVector2, C64};
use mzpovm::relations::distinguishability;
use mzpovm::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MzpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Unsupported = 4,
    InvalidPovm = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MzpExperiment {
    Path = 0,
    Interference = 1,
    Marking = 2,
    Erasure = 3,
    Quantitative = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MzpPovmKind {
    Sharp = 0,
    Unsharp = 1,
    Trivial = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MzpComplex {
    pub re: f64,
    pub im: f64,
}

/// Experiment and angles in radians.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MzpConfig {
    pub experiment: MzpExperiment,
    pub delta: f64,
    pub gamma: f64,
    pub theta: f64,
}

/// Opaque POVM handle.
pub struct MzpPovm {
    povm: DiscretePovm,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: MzpStatus, msg: impl Into<String>) -> MzpStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> MzpStatus {
    let status = match e {
        Error::UnsupportedExperiment(_) => MzpStatus::Unsupported,
        Error::InvalidPovm(_) => MzpStatus::InvalidPovm,
        Error::InvalidScheme(_) => MzpStatus::Internal,
        _ => MzpStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into `Internal`.
fn guarded(f: impl FnOnce() -> MzpStatus) -> MzpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MzpStatus::Internal, "internal panic"),
    }
}

impl From<MzpExperiment> for Experiment {
    fn from(e: MzpExperiment) -> Self {
        match e {
            MzpExperiment::Path => Experiment::Path,
            MzpExperiment::Interference => Experiment::Interference,
            MzpExperiment::Marking => Experiment::Marking,
            MzpExperiment::Erasure => Experiment::Erasure,
            MzpExperiment::Quantitative => Experiment::Quantitative,
        }
    }
}

fn config_from(c: &MzpConfig) -> Result<MzConfig, MzpStatus> {
    MzConfig::new(c.experiment.into(), c.delta, c.gamma, c.theta).map_err(from_error)
}

fn state_from(amps: &[MzpComplex; 2]) -> Result<StateVector2, MzpStatus> {
    StateVector2::from_amplitudes(C64::new(amps[0].re, amps[0].im), C64::new(amps[1].re, amps[1].im))
        .map_err(from_error)
}

fn into_handle(povm: DiscretePovm, out: *mut *mut MzpPovm) -> MzpStatus {
    let labels = povm
        .labels()
        .map(|l| CString::new(l).expect("labels are digits"))
        .collect();
    // SAFETY: callers check `out` for null before building the POVM.
    unsafe { *out = Box::into_raw(Box::new(MzpPovm { povm, labels })) };
    MzpStatus::Ok
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mzp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Extracts the POVM measured by the experiment's standard scheme.
///
/// # Safety
/// `config` must point to a valid `MzpConfig`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_extract(config: *const MzpConfig, out: *mut *mut MzpPovm) -> MzpStatus {
    guarded(|| {
        if config.is_null() || out.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        let cfg = match config_from(&*config) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match extract_povm(&scheme_for(&cfg)) {
            Ok(p) => into_handle(p, out),
            Err(e) => from_error(e),
        }
    })
}

/// Analytic joint POVM for the marking, erasure and quantitative experiments.
///
/// # Safety
/// `config` must point to a valid `MzpConfig`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_closed_form(config: *const MzpConfig, out: *mut *mut MzpPovm) -> MzpStatus {
    guarded(|| {
        if config.is_null() || out.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        let cfg = match config_from(&*config) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match closed_form(&cfg) {
            Ok(cf) => into_handle(cf.joint, out),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `povm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_len(povm: *const MzpPovm, out: *mut usize) -> MzpStatus {
    if povm.is_null() || out.is_null() {
        return fail(MzpStatus::NullPointer, "null argument");
    }
    *out = (*povm).povm.len();
    MzpStatus::Ok
}

/// Writes effect `index` as four row-major entries.
///
/// # Safety
/// `povm` must be a live handle; `out` must have room for 4 values.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_effect(povm: *const MzpPovm, index: usize, out: *mut MzpComplex) -> MzpStatus {
    if povm.is_null() || out.is_null() {
        return fail(MzpStatus::NullPointer, "null argument");
    }
    let Some(e) = (*povm).povm.effects().get(index) else {
        return fail(MzpStatus::OutOfRange, format!("effect index {index} out of range"));
    };
    let m = e.operator.entries();
    for (k, z) in m.iter().flatten().enumerate() {
        *out.add(k) = MzpComplex { re: z.re, im: z.im };
    }
    MzpStatus::Ok
}

/// Label of effect `index` as a NUL-terminated string owned by the handle.
///
/// # Safety
/// `povm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_label(povm: *const MzpPovm, index: usize, out: *mut *const c_char) -> MzpStatus {
    if povm.is_null() || out.is_null() {
        return fail(MzpStatus::NullPointer, "null argument");
    }
    match (&*povm).labels.get(index) {
        Some(l) => {
            *out = l.as_ptr();
            MzpStatus::Ok
        }
        None => fail(MzpStatus::OutOfRange, format!("effect index {index} out of range")),
    }
}

/// Outcome probabilities ⟨ψ|E_k|ψ⟩ for a normalized input, in effect order.
///
/// # Safety
/// `povm` must be a live handle; `psi` must hold 2 values; `out` must have
/// room for `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_probabilities(
    povm: *const MzpPovm,
    psi: *const MzpComplex,
    out: *mut f64,
    out_len: usize,
) -> MzpStatus {
    guarded(|| {
        if povm.is_null() || psi.is_null() || out.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        let p = &(*povm).povm;
        if out_len < p.len() {
            return fail(MzpStatus::BufferTooSmall, format!("need {} slots, got {out_len}", p.len()));
        }
        let state = match state_from(&*(psi as *const [MzpComplex; 2])) {
            Ok(s) => s,
            Err(s) => return s,
        };
        for (k, v) in p.probabilities_pure(&state).into_iter().enumerate() {
            *out.add(k) = v;
        }
        MzpStatus::Ok
    })
}

/// Checks the POVM axioms and classifies the POVM.
///
/// # Safety
/// `povm` must be a live handle; `kind` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_validate(povm: *const MzpPovm, kind: *mut MzpPovmKind) -> MzpStatus {
    guarded(|| {
        if povm.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        match (*povm).povm.validate() {
            Ok(c) => {
                if !kind.is_null() {
                    *kind = match c.kind() {
                        PovmKind::Sharp => MzpPovmKind::Sharp,
                        PovmKind::Unsharp => MzpPovmKind::Unsharp,
                        PovmKind::Trivial => MzpPovmKind::Trivial,
                    };
                }
                MzpStatus::Ok
            }
            Err(v) => fail(MzpStatus::InvalidPovm, v.to_string()),
        }
    })
}

/// # Safety
/// `povm` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzp_povm_free(povm: *mut MzpPovm) {
    if !povm.is_null() {
        drop(Box::from_raw(povm));
    }
}

/// Path distinguishability D and optimal inference probability L for input
/// `psi` marked by `p1`, `p2`.
///
/// # Safety
/// `psi`, `p1`, `p2` must each hold 2 values; `d` and `l` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_distinguishability(
    psi: *const MzpComplex,
    p1: *const MzpComplex,
    p2: *const MzpComplex,
    d: *mut f64,
    l: *mut f64,
) -> MzpStatus {
    guarded(|| {
        if psi.is_null() || p1.is_null() || p2.is_null() || d.is_null() || l.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        let states = [psi, p1, p2].map(|p| state_from(&*(p as *const [MzpComplex; 2])));
        let [Ok(psi), Ok(p1), Ok(p2)] = states else {
            return states.into_iter().find_map(Result::err).unwrap_or(MzpStatus::Internal);
        };
        let dist = distinguishability(&psi, &p1, &p2);
        *d = dist.d;
        *l = dist.l;
        MzpStatus::Ok
    })
}

/// JSON report identical to the command-line `run` output. Release the string
/// with `mzp_string_free`.
///
/// # Safety
/// `config` must point to a valid `MzpConfig`; `psi` must hold 2 values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_run_report(
    config: *const MzpConfig,
    psi: *const MzpComplex,
    out: *mut *mut c_char,
) -> MzpStatus {
    guarded(|| {
        if config.is_null() || psi.is_null() || out.is_null() {
            return fail(MzpStatus::NullPointer, "null argument");
        }
        let cfg = match config_from(&*config) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let state = match state_from(&*(psi as *const [MzpComplex; 2])) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match mzpovm::cli::run_report(&cfg, &state) {
            Ok(v) => {
                let text = mzpovm::cli::to_canonical_json(&v);
                *out = CString::new(text).expect("JSON has no NUL").into_raw();
                MzpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by `mzp_run_report` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
