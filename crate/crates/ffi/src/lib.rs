//! C interface to the `hawkes` toolkit.
//!
//! Models and event sequences are opaque handles created and destroyed
//! through this API. Every fallible function returns a [`HawkesStatus`];
//! on failure a description is available from [`hawkes_last_error`] on the
//! same thread until the next failing call.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hawkes::estimate::{fit_mle, log_likelihood, FitConfig};
use hawkes::gof::{goodness_of_fit, GofOptions};
use hawkes::intensity::{compensator, conditional_intensity};
use hawkes::simulate::{simulate, Algorithm, SimulationConfig};
use hawkes::spectral::{covariance_density, power_spectral_density};
use hawkes::{rng, EventSequence, HawkesError, HawkesModel};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HawkesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonStationary = 3,
    OutOfWindow = 4,
    InvalidEvents = 5,
    NotConverged = 6,
    BufferTooSmall = 7,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HawkesAlgorithm {
    Thinning = 0,
    Cluster = 1,
    Inversion = 2,
}

fn algorithm_of(code: u32) -> Result<Algorithm, (HawkesStatus, String)> {
    match code {
        c if c == HawkesAlgorithm::Thinning as u32 => Ok(Algorithm::Thinning),
        c if c == HawkesAlgorithm::Cluster as u32 => Ok(Algorithm::Cluster),
        c if c == HawkesAlgorithm::Inversion as u32 => Ok(Algorithm::Inversion),
        c => Err((HawkesStatus::InvalidArgument, format!("unknown algorithm code {c}"))),
    }
}

/// Opaque model handle.
pub struct HawkesModelHandle(HawkesModel);

/// Opaque event sequence handle.
pub struct HawkesEventsHandle(EventSequence);

/// Maximum likelihood estimate of the exponential-kernel model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HawkesFit {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub log_likelihood: f64,
    pub branching_ratio: f64,
    pub converged: bool,
    pub iterations: u64,
}

/// Scalar outcome of the residual test battery.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HawkesGofSummary {
    pub events: u64,
    pub transformed_horizon: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub ks_accepted: bool,
    pub lewis_statistic: f64,
    pub lewis_p_value: f64,
    pub lewis_accepted: bool,
    pub arcsine_m_star: f64,
    pub arcsine_accepted: bool,
    pub endpoint_m1: f64,
    pub endpoint_accepted: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &HawkesError) -> HawkesStatus {
    match err {
        HawkesError::NonStationary { .. } => HawkesStatus::NonStationary,
        HawkesError::OutOfWindow { .. } => HawkesStatus::OutOfWindow,
        HawkesError::InvalidEvents(_) | HawkesError::EmptyInput | HawkesError::TooFewPoints { .. } => {
            HawkesStatus::InvalidEvents
        }
        HawkesError::RootNotConverged { .. } => HawkesStatus::NotConverged,
        _ => HawkesStatus::InvalidArgument,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard<F>(body: F) -> HawkesStatus
where
    F: FnOnce() -> Result<(), (HawkesStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HawkesStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HawkesStatus::Internal
        }
    }
}

fn core<T>(r: hawkes::Result<T>) -> Result<T, (HawkesStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (HawkesStatus, String)> {
    p.as_ref().ok_or_else(|| (HawkesStatus::NullPointer, format!("{name} is null")))
}

fn check_out<T>(p: *mut T, name: &str) -> Result<(), (HawkesStatus, String)> {
    if p.is_null() {
        Err((HawkesStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Message for the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn hawkes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hawkes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn box_model(model: HawkesModel, out: *mut *mut HawkesModelHandle) {
    unsafe { *out = Box::into_raw(Box::new(HawkesModelHandle(model))) };
}

/// Exponential kernel `alpha exp(-beta s)` with baseline `lambda`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_model_new_exp(
    lambda: f64,
    alpha: f64,
    beta: f64,
    out: *mut *mut HawkesModelHandle,
) -> HawkesStatus {
    guard(|| {
        check_out(out, "out")?;
        box_model(core(HawkesModel::exponential(lambda, alpha, beta))?, out);
        Ok(())
    })
}

/// Power-law kernel `k / (c + s)^p` with baseline `lambda`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_model_new_power_law(
    lambda: f64,
    k: f64,
    c: f64,
    p: f64,
    out: *mut *mut HawkesModelHandle,
) -> HawkesStatus {
    guard(|| {
        check_out(out, "out")?;
        box_model(core(HawkesModel::power_law(lambda, k, c, p))?, out);
        Ok(())
    })
}

/// Releases a model. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hawkes_model_free(model: *mut HawkesModelHandle) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[no_mangle]
pub unsafe extern "C" fn hawkes_model_branching_ratio(
    model: *const HawkesModelHandle,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        check_out(out, "out")?;
        *out = core(m.0.branching_ratio())?;
        Ok(())
    })
}

/// Copies `len` strictly increasing times in `(0, horizon]`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_events_new(
    times: *const f64,
    len: usize,
    horizon: f64,
    out: *mut *mut HawkesEventsHandle,
) -> HawkesStatus {
    guard(|| {
        check_out(out, "out")?;
        let slice = if len == 0 {
            &[][..]
        } else {
            if times.is_null() {
                return Err((HawkesStatus::NullPointer, "times is null".into()));
            }
            std::slice::from_raw_parts(times, len)
        };
        let ev = core(EventSequence::new(slice.to_vec(), horizon))?;
        *out = Box::into_raw(Box::new(HawkesEventsHandle(ev)));
        Ok(())
    })
}

/// Releases an event sequence. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hawkes_events_free(events: *mut HawkesEventsHandle) {
    if !events.is_null() {
        drop(Box::from_raw(events));
    }
}

/// Number of arrivals, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn hawkes_events_len(events: *const HawkesEventsHandle) -> usize {
    events.as_ref().map_or(0, |e| e.0.len())
}

/// Observation end, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn hawkes_events_horizon(events: *const HawkesEventsHandle) -> f64 {
    events.as_ref().map_or(f64::NAN, |e| e.0.horizon())
}

/// Copies the arrival times into `buf`.
///
/// Returns `BUFFER_TOO_SMALL` when `capacity` is below the length, which
/// can be queried first with [`hawkes_events_len`].
#[no_mangle]
pub unsafe extern "C" fn hawkes_events_copy_times(
    events: *const HawkesEventsHandle,
    buf: *mut f64,
    capacity: usize,
) -> HawkesStatus {
    guard(|| {
        let ev = deref(events, "events")?;
        let times = ev.0.times();
        if capacity < times.len() {
            return Err((
                HawkesStatus::BufferTooSmall,
                format!("need {} slots, got {capacity}", times.len()),
            ));
        }
        if !times.is_empty() {
            check_out(buf, "buf")?;
            ptr::copy_nonoverlapping(times.as_ptr(), buf, times.len());
        }
        Ok(())
    })
}

/// One realisation on `[0, horizon]` from a seeded stream.
///
/// `algorithm` is a `HawkesAlgorithm` value.
#[no_mangle]
pub unsafe extern "C" fn hawkes_simulate(
    model: *const HawkesModelHandle,
    algorithm: u32,
    horizon: f64,
    seed: u64,
    out: *mut *mut HawkesEventsHandle,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        check_out(out, "out")?;
        let algorithm = algorithm_of(algorithm)?;
        let mut rng = rng::seeded(seed);
        let ev = core(simulate(algorithm, horizon, &m.0, &mut rng, &SimulationConfig::default()))?;
        *out = Box::into_raw(Box::new(HawkesEventsHandle(ev)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hawkes_log_likelihood(
    model: *const HawkesModelHandle,
    events: *const HawkesEventsHandle,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let ev = deref(events, "events")?;
        check_out(out, "out")?;
        *out = log_likelihood(&m.0, &ev.0);
        Ok(())
    })
}

/// Left-limit conditional intensity at `t`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_intensity(
    model: *const HawkesModelHandle,
    events: *const HawkesEventsHandle,
    t: f64,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let ev = deref(events, "events")?;
        check_out(out, "out")?;
        if !t.is_finite() {
            return Err((HawkesStatus::InvalidArgument, format!("t must be finite, got {t}")));
        }
        *out = conditional_intensity(&m.0, &ev.0, t);
        Ok(())
    })
}

/// Compensator at `t` in `[0, horizon]`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_compensator(
    model: *const HawkesModelHandle,
    events: *const HawkesEventsHandle,
    t: f64,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let ev = deref(events, "events")?;
        check_out(out, "out")?;
        *out = core(compensator(&m.0, &ev.0, t))?;
        Ok(())
    })
}

/// Multistart maximum likelihood fit.
///
/// `out` is filled even when the optimiser did not converge; the status is
/// then `NOT_CONVERGED`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_fit(events: *const HawkesEventsHandle, out: *mut HawkesFit) -> HawkesStatus {
    guard(|| {
        let ev = deref(events, "events")?;
        check_out(out, "out")?;
        let fit = core(fit_mle(&ev.0, None, &FitConfig::default()))?;
        let s = fit.summary();
        *out = HawkesFit {
            lambda: s.lambda,
            alpha: s.alpha,
            beta: s.beta,
            log_likelihood: s.loglik,
            branching_ratio: s.branching_ratio,
            converged: s.converged,
            iterations: s.iterations as u64,
        };
        if s.converged {
            Ok(())
        } else {
            Err((HawkesStatus::NotConverged, "optimiser did not converge".into()))
        }
    })
}

/// Residual analysis of `events` under `model` at significance `level`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_gof(
    model: *const HawkesModelHandle,
    events: *const HawkesEventsHandle,
    level: f64,
    durbin: bool,
    out: *mut HawkesGofSummary,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let ev = deref(events, "events")?;
        check_out(out, "out")?;
        let r = core(goodness_of_fit(&m.0, &ev.0, &GofOptions { level, durbin }))?;
        *out = HawkesGofSummary {
            events: r.events as u64,
            transformed_horizon: r.transformed_horizon,
            ks_statistic: r.ks_exp.statistic,
            ks_p_value: r.ks_exp.p_value,
            ks_accepted: r.ks_exp.accepted,
            lewis_statistic: r.lewis.statistic,
            lewis_p_value: r.lewis.p_value,
            lewis_accepted: r.lewis.accepted,
            arcsine_m_star: r.arcsine.m_star,
            arcsine_accepted: r.arcsine.accepted,
            endpoint_m1: r.endpoint_normal.m1,
            endpoint_accepted: r.endpoint_normal.accepted,
        };
        Ok(())
    })
}

/// Covariance density at a non-zero lag.
#[no_mangle]
pub unsafe extern "C" fn hawkes_covariance_density(
    model: *const HawkesModelHandle,
    tau: f64,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        check_out(out, "out")?;
        *out = core(covariance_density(&m.0, tau))?;
        Ok(())
    })
}

/// Two-sided power spectral density at angular frequency `omega`.
#[no_mangle]
pub unsafe extern "C" fn hawkes_power_spectral_density(
    model: *const HawkesModelHandle,
    omega: f64,
    out: *mut f64,
) -> HawkesStatus {
    guard(|| {
        let m = deref(model, "model")?;
        check_out(out, "out")?;
        *out = core(power_spectral_density(&m.0, omega))?;
        Ok(())
    })
}
