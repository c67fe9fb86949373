//! C interface: an opaque link handle, integer status codes and a
//! per-thread last-error message.
//!
//! Every function returns an [`AtmoqkdStatus`]; results go through out
//! pointers. Panics are caught at the boundary and reported as
//! `ATMOQKD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use atmoqkd::channel::{rytov_variance, LinkScenario, Season};
use atmoqkd::engine::{evaluate_point, EngineOptions};
use atmoqkd::keyrate::Detector;
use atmoqkd::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtmoqkdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Regime = 4,
    Numeric = 5,
    Panic = 6,
    Other = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtmoqkdDetector {
    Homodyne = 0,
    Heterodyne = 1,
}

/// Opaque link: scenario plus Monte Carlo settings.
pub struct AtmoqkdLink {
    scenario: LinkScenario,
    engine: EngineOptions,
}

/// Transmittance statistics of one Monte Carlo run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtmoqkdMoments {
    pub mean_t: f64,
    pub mean_sqrt_t: f64,
    pub var_sqrt_t: f64,
    pub clamp_fraction: f64,
    pub n_samples: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtmoqkdKeyRate {
    pub moments: AtmoqkdMoments,
    pub rytov_variance: f64,
    /// Beam-wander interruption probability.
    pub interruption: f64,
    /// Phase-noise excess noise from arrival-time jitter, SNU.
    pub eps_theta: f64,
    pub i_ab: f64,
    pub chi_be: f64,
    /// Rate without interruption, bits/pulse; may be negative.
    pub k: f64,
    /// Rate including interruption, bits/pulse; may be negative.
    pub k_atm: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AtmoqkdStatus {
    match e {
        Error::Invalid { .. } | Error::Parse(_) => AtmoqkdStatus::InvalidArgument,
        Error::Domain { .. } | Error::Pole { .. } => AtmoqkdStatus::Domain,
        Error::Regime { .. } => AtmoqkdStatus::Regime,
        Error::Numeric { .. } | Error::Overflow { .. } | Error::NonConvergence { .. } => AtmoqkdStatus::Numeric,
        _ => AtmoqkdStatus::Other,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (AtmoqkdStatus, String)>) -> AtmoqkdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AtmoqkdStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            AtmoqkdStatus::Panic
        }
    }
}

fn core(e: Error) -> (AtmoqkdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AtmoqkdStatus, String) {
    (AtmoqkdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn link_mut<'a>(link: *mut AtmoqkdLink) -> Result<&'a mut AtmoqkdLink, (AtmoqkdStatus, String)> {
    link.as_mut().ok_or_else(|| null("link"))
}

unsafe fn link_ref<'a>(link: *const AtmoqkdLink) -> Result<&'a AtmoqkdLink, (AtmoqkdStatus, String)> {
    link.as_ref().ok_or_else(|| null("link"))
}

/// Creates a link with the reference parameters of `season` ("spring",
/// "summer", "autumn" or "winter") at `distance_m` metres.
///
/// # Safety
/// `season` must be a NUL-terminated string; `out` must be writable.
/// Release the handle with [`atmoqkd_link_free`].
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_new(
    season: *const c_char,
    distance_m: f64,
    out: *mut *mut AtmoqkdLink,
) -> AtmoqkdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if season.is_null() {
            return Err(null("season"));
        }
        let name = CStr::from_ptr(season)
            .to_str()
            .map_err(|_| (AtmoqkdStatus::InvalidArgument, "season is not UTF-8".to_string()))?;
        let season: Season = name.parse().map_err(core)?;
        let scenario = LinkScenario::reference(season, distance_m);
        scenario.validate().map_err(core)?;
        *out = Box::into_raw(Box::new(AtmoqkdLink {
            scenario,
            engine: EngineOptions::default(),
        }));
        Ok(())
    })
}

/// # Safety
/// `link` must come from [`atmoqkd_link_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_free(link: *mut AtmoqkdLink) {
    if !link.is_null() {
        drop(Box::from_raw(link));
    }
}

/// # Safety
/// `link` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_set_distance(link: *mut AtmoqkdLink, distance_m: f64) -> AtmoqkdStatus {
    guard(|| {
        let l = link_mut(link)?;
        let s = l.scenario.with_distance(distance_m);
        s.validate().map_err(core)?;
        l.scenario = s;
        Ok(())
    })
}

/// # Safety
/// `link` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_set_detector(link: *mut AtmoqkdLink, detector: AtmoqkdDetector) -> AtmoqkdStatus {
    guard(|| {
        link_mut(link)?.scenario.detector = match detector {
            AtmoqkdDetector::Homodyne => Detector::Homodyne,
            AtmoqkdDetector::Heterodyne => Detector::Heterodyne,
        };
        Ok(())
    })
}

/// Fixed channel excess noise ε in SNU.
///
/// # Safety
/// `link` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_set_excess_noise(link: *mut AtmoqkdLink, excess_noise: f64) -> AtmoqkdStatus {
    guard(|| {
        let l = link_mut(link)?;
        let s = LinkScenario {
            excess_noise,
            ..l.scenario.clone()
        };
        s.validate().map_err(core)?;
        l.scenario = s;
        Ok(())
    })
}

/// Monte Carlo settings. `workers` = 0 uses all cores; results do not
/// depend on it.
///
/// # Safety
/// `link` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_set_sampling(
    link: *mut AtmoqkdLink,
    samples: usize,
    seed: u64,
    workers: usize,
) -> AtmoqkdStatus {
    guard(|| {
        let l = link_mut(link)?;
        if samples == 0 {
            return Err((AtmoqkdStatus::InvalidArgument, "samples must be >= 1".into()));
        }
        l.engine.samples = samples;
        l.engine.seed = seed;
        l.engine.workers = workers;
        Ok(())
    })
}

/// # Safety
/// `link` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_rytov_variance(link: *const AtmoqkdLink, out: *mut f64) -> AtmoqkdStatus {
    guard(|| {
        let l = link_ref(link)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = rytov_variance(&l.scenario);
        Ok(())
    })
}

/// Samples the channel and evaluates the secret key rate.
///
/// # Safety
/// `link` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn atmoqkd_link_key_rate(link: *const AtmoqkdLink, out: *mut AtmoqkdKeyRate) -> AtmoqkdStatus {
    guard(|| {
        let l = link_ref(link)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = evaluate_point(&l.scenario, &l.engine).map_err(core)?;
        let st = &p.channel.stats;
        *out = AtmoqkdKeyRate {
            moments: AtmoqkdMoments {
                mean_t: st.mean_t,
                mean_sqrt_t: st.mean_sqrt_t,
                var_sqrt_t: st.var_sqrt_t,
                clamp_fraction: st.clamp_fraction(),
                n_samples: st.n_samples,
            },
            rytov_variance: p.channel.rytov,
            interruption: p.channel.interruption.probability,
            eps_theta: p.channel.phase_noise.excess_noise,
            i_ab: p.key_rate.i_ab,
            chi_be: p.key_rate.chi_be,
            k: p.key_rate.k,
            k_atm: p.key_rate.k_atm,
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn atmoqkd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn atmoqkd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
