//! C ABI over `qftent`.
//!
//! States cross the boundary as opaque `QftentState` handles created by the
//! `qftent_state_*` constructors and released with `qftent_state_free`.
//! Every fallible call returns a `QftentStatus`; on failure a description is
//! kept per thread and can be copied out with `qftent_last_error`.
//! Panics never unwind into C; they surface as `QFTENT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use qftent::approx::{approx_g_periodic, approx_p_periodic, Branch};
use qftent::experiments::delta_g;
use qftent::groverian::{p_max, InitPolicy, OptimizerConfig};
use qftent::qft::{inverse_qft, qft};
use qftent::shorprep::shor_demo;
use qftent::states::{
    balanced_w, basis_state, es_state, ghz, periodic_state, random_state, w, EsSpec, PeriodicSpec,
};
use qftent::{Error, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftentStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BufferTooSmall = 4,
    NotFound = 5,
    Panic = 6,
}

/// Opaque handle to a normalized state vector.
pub struct QftentState(StateVector);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftentOptimizerConfig {
    /// Restart count; 0 selects `8 + q`.
    pub restarts: u32,
    pub max_sweeps: u32,
    pub tol: f64,
    pub pair_step: bool,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftentGroverian {
    pub p_max: f64,
    pub g: f64,
    pub sweeps_used: u32,
    pub restart_index: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftentBranch {
    Ascending = 0,
    Descending = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftentApprox {
    /// Number of terms `A` of the periodic state.
    pub terms: u64,
    pub p_accurate: f64,
    pub g_accurate: f64,
    pub g_simple: f64,
    pub branch: QftentBranch,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(QftentStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch { .. } => QftentStatus::DimensionMismatch,
            _ => QftentStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QftentStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> QftentStatus
where
    F: FnOnce() -> Result<(), Failure> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => QftentStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QftentStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(state: *const QftentState) -> Result<&'a StateVector, Failure> {
    state.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

unsafe fn store(out: *mut *mut QftentState, psi: StateVector) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(QftentState(psi)));
    Ok(())
}

fn to_config(cfg: &QftentOptimizerConfig) -> OptimizerConfig {
    OptimizerConfig {
        restarts: (cfg.restarts > 0).then_some(cfg.restarts as usize),
        max_sweeps: cfg.max_sweeps as usize,
        tol: cfg.tol,
        pair_step: cfg.pair_step,
        init: InitPolicy::Standard,
        seed: cfg.seed,
    }
}

/// Library defaults: automatic restarts, 200 sweeps, tolerance 1e-10, pair step on.
#[no_mangle]
pub extern "C" fn qftent_config_default() -> QftentOptimizerConfig {
    let d = OptimizerConfig::default();
    QftentOptimizerConfig {
        restarts: 0,
        max_sweeps: d.max_sweeps as u32,
        tol: d.tol,
        pair_step: d.pair_step,
        seed: d.seed,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qftent_status_message(status: QftentStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        QftentStatus::Ok => c"ok",
        QftentStatus::NullPointer => c"null pointer argument",
        QftentStatus::InvalidArgument => c"invalid argument",
        QftentStatus::DimensionMismatch => c"dimension mismatch",
        QftentStatus::BufferTooSmall => c"buffer too small",
        QftentStatus::NotFound => c"no result found",
        QftentStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Copies the calling thread's last error message, NUL terminated and
/// truncated to `len` bytes. Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qftent_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a state from `len` real and imaginary parts; `len` must be a power
/// of two. The vector is renormalized.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_from_amplitudes(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QftentState,
) -> QftentStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("amplitude buffer"));
        }
        let (re, im) = (slice::from_raw_parts(re, len), slice::from_raw_parts(im, len));
        let amps = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        store(out, StateVector::from_amplitudes(amps)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_basis(q: u32, k: u64, out: *mut *mut QftentState) -> QftentStatus {
    guard(|| store(out, basis_state(q as usize, k as usize)?))
}

/// Periodic state with period `r` and shift `l` (`l < r <= 2^q`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_periodic(
    q: u32,
    r: u64,
    l: u64,
    out: *mut *mut QftentState,
) -> QftentStatus {
    guard(|| {
        let spec = PeriodicSpec::new(q as usize, r as usize, l as usize)?;
        store(out, periodic_state(&spec))
    })
}

/// Equal superposition of `count` basis indices.
///
/// # Safety
/// `indices` must point to `count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_es(
    q: u32,
    indices: *const u64,
    count: usize,
    out: *mut *mut QftentState,
) -> QftentStatus {
    guard(|| {
        if indices.is_null() {
            return Err(null("indices"));
        }
        let set = slice::from_raw_parts(indices, count).iter().map(|&k| k as usize);
        store(out, es_state(&EsSpec::new(q as usize, set)?))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_ghz(q: u32, out: *mut *mut QftentState) -> QftentStatus {
    guard(|| store(out, ghz(q as usize)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_w(q: u32, out: *mut *mut QftentState) -> QftentStatus {
    guard(|| store(out, w(q as usize)?))
}

/// Balanced W state on `2n` qubits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_balanced_w(n: u32, out: *mut *mut QftentState) -> QftentStatus {
    guard(|| store(out, balanced_w(n as usize)?))
}

/// Haar-random state from a ChaCha8 stream seeded with `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_random(q: u32, seed: u64, out: *mut *mut QftentState) -> QftentStatus {
    guard(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        store(out, random_state(q as usize, &mut rng)?)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `state` must come from a `qftent_state_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_free(state: *mut QftentState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Qubit count, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_qubits(state: *const QftentState) -> u32 {
    state.as_ref().map_or(0, |s| s.0.qubits() as u32)
}

/// Copies the amplitudes into `re` and `im`, each of at least `2^q` doubles.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qftent_state_amplitudes(
    state: *const QftentState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QftentStatus {
    guard(|| {
        let psi = state_ref(state)?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        if len < psi.dim() {
            return Err(Failure(
                QftentStatus::BufferTooSmall,
                format!("need {} entries, got {len}", psi.dim()),
            ));
        }
        let (re, im) = (slice::from_raw_parts_mut(re, len), slice::from_raw_parts_mut(im, len));
        for (k, a) in psi.amplitudes().iter().enumerate() {
            re[k] = a.re;
            im[k] = a.im;
        }
        Ok(())
    })
}

/// Applies the QFT (or its inverse) and returns a new handle.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_qft(
    state: *const QftentState,
    inverse: bool,
    out: *mut *mut QftentState,
) -> QftentStatus {
    guard(|| {
        let psi = state_ref(state)?;
        store(out, if inverse { inverse_qft(psi) } else { qft(psi) })
    })
}

/// Groverian measure of a state. When `x` and `theta` are non-null they
/// receive the nearest product state's parameters (`len >= q`).
///
/// # Safety
/// `state` must be a live handle, `config` and `result` valid pointers, and
/// `x`/`theta` null or pointing to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qftent_groverian(
    state: *const QftentState,
    config: *const QftentOptimizerConfig,
    result: *mut QftentGroverian,
    x: *mut f64,
    theta: *mut f64,
    len: usize,
) -> QftentStatus {
    guard(|| {
        let psi = state_ref(state)?;
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        let result = result.as_mut().ok_or_else(|| null("result"))?;
        if (!x.is_null() || !theta.is_null()) && len < psi.qubits() {
            return Err(Failure(
                QftentStatus::BufferTooSmall,
                format!("need {} entries, got {len}", psi.qubits()),
            ));
        }
        let res = p_max(psi, &to_config(cfg))?;
        *result = QftentGroverian {
            p_max: res.p_max,
            g: res.g,
            sweeps_used: res.sweeps_used as u32,
            restart_index: res.restart_index as u32,
        };
        if !x.is_null() {
            slice::from_raw_parts_mut(x, len)[..psi.qubits()].copy_from_slice(res.nearest.x());
        }
        if !theta.is_null() {
            slice::from_raw_parts_mut(theta, len)[..psi.qubits()].copy_from_slice(res.nearest.theta());
        }
        Ok(())
    })
}

/// `G` before and after the QFT; `delta = after - before`.
///
/// # Safety
/// `state` must be a live handle; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qftent_delta_g(
    state: *const QftentState,
    config: *const QftentOptimizerConfig,
    g_before: *mut f64,
    g_after: *mut f64,
) -> QftentStatus {
    guard(|| {
        let psi = state_ref(state)?;
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        if g_before.is_null() || g_after.is_null() {
            return Err(null("output"));
        }
        let d = delta_g(psi, &to_config(cfg))?;
        *g_before = d.g_before();
        *g_after = d.g_after();
        Ok(())
    })
}

/// Approximate entanglement of the periodic state `(q, r, l)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_approx_periodic(q: u32, r: u64, l: u64, out: *mut QftentApprox) -> QftentStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let spec = PeriodicSpec::new(q as usize, r as usize, l as usize)?;
        let (p, tag) = approx_p_periodic(&spec);
        *out = QftentApprox {
            terms: spec.terms() as u64,
            p_accurate: p,
            g_accurate: qftent::groverian::log_measure(p),
            g_simple: approx_g_periodic(q as usize, r as usize)?,
            branch: match tag.branch {
                Branch::Ascending => QftentBranch::Ascending,
                Branch::Descending => QftentBranch::Descending,
            },
        };
        Ok(())
    })
}

/// Runs the simulated factoring loop. `QFTENT_STATUS_NOT_FOUND` when every
/// attempt failed.
///
/// # Safety
/// `factor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qftent_shor(n: u64, seed: u64, attempts: u32, factor: *mut u64) -> QftentStatus {
    guard(|| {
        let factor = factor.as_mut().ok_or_else(|| null("factor"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let report = shor_demo(n, None, &mut rng, attempts as usize)?;
        match report.factor {
            Some(f) => {
                *factor = f;
                Ok(())
            }
            None => Err(Failure(
                QftentStatus::NotFound,
                format!("no factor of {n} in {attempts} attempts"),
            )),
        }
    })
}
