//! C ABI over the lattice-search engines: opaque system handles, plain
//! structs for results, integer status codes, and a per-thread error
//! message. The header `include/adia.h` is generated at build time.
//!
//! Every function is panic-safe at the boundary and tolerates null pointers
//! (returning `ADIA_STATUS_NULL_POINTER`). Handles are created by the
//! `adia_system_new_*` constructors and must be released exactly once with
//! `adia_system_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use adia_core::dynamics::{evolve, EvolutionConfig, ScheduleKind, StepControl};
use adia_core::error::Error;
use adia_core::lattice::{Boundary, LatticeSpec, ModelParams};
use adia_core::schedule::{sample_integrand, summarize_peak, GridConfig};
use adia_core::spectral::{
    grover_reference, OpenModel, PeriodicModel, SolveOptions, SpectralModel,
};

/// Status codes mirroring the CLI exit-code discipline.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdiaStatus {
    Ok = 0,
    /// Invalid argument (lattice/model/grid validation failure).
    InvalidArgument = 2,
    /// Numerical failure (non-convergence, degenerate gap, ...).
    NumericalFailure = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// Internal panic caught at the boundary.
    Panic = 5,
}

/// One spectral sample of the interpolating Hamiltonian.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AdiaSpectralPoint {
    pub s: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub v01: f64,
    /// v01 / gap^2
    pub integrand: f64,
}

/// Peak metrics of the integrand curve.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AdiaPeakSummary {
    pub peak_height: f64,
    pub peak_location: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    pub width: f64,
    pub t_estimate: f64,
    pub t_lae: f64,
    pub t_const: f64,
}

/// Final statistics of one Schrodinger evolution.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AdiaEvolution {
    /// Final marked-site probability.
    pub p0: f64,
    pub norm_drift: f64,
    pub steps: u64,
    /// |P0 change| in the final step-halving comparison.
    pub halving_delta: f64,
}

enum Model {
    Periodic(PeriodicModel),
    Open(OpenModel),
}

/// Opaque handle: one lattice + model-parameter combination with its
/// prepared solver state.
pub struct AdiaSystem {
    spec: LatticeSpec,
    params: ModelParams,
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(err: &Error) -> AdiaStatus {
    match err.exit_code() {
        2 => AdiaStatus::InvalidArgument,
        _ => AdiaStatus::NumericalFailure,
    }
}

fn guard<F: FnOnce() -> AdiaStatus>(f: F) -> AdiaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            AdiaStatus::Panic
        }
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn adia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn adia_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn new_system(
    dimension: u32,
    linear_size: u32,
    boundary: Boundary,
    marked: Option<usize>,
    t: f64,
    mu: f64,
    epsilon: f64,
) -> Result<AdiaSystem, Error> {
    let spec = LatticeSpec::new(dimension as usize, linear_size as usize, boundary, marked)?;
    let params = ModelParams::new(t, mu, epsilon)?;
    let model = match boundary {
        Boundary::Periodic => Model::Periodic(PeriodicModel::new(&spec, params)?),
        Boundary::Open => Model::Open(OpenModel::new(&spec, params, SolveOptions::default())?),
    };
    Ok(AdiaSystem {
        spec,
        params,
        model,
    })
}

/// Create a periodic system. On success writes a handle to `out`.
///
/// # Safety
/// `out` must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn adia_system_new_periodic(
    dimension: u32,
    linear_size: u32,
    t: f64,
    mu: f64,
    epsilon: f64,
    out: *mut *mut AdiaSystem,
) -> AdiaStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return AdiaStatus::NullPointer;
        }
        match new_system(
            dimension,
            linear_size,
            Boundary::Periodic,
            None,
            t,
            mu,
            epsilon,
        ) {
            Ok(sys) => {
                unsafe { *out = Box::into_raw(Box::new(sys)) };
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Create an open-boundary system with a marked site.
///
/// # Safety
/// `out` must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn adia_system_new_open(
    dimension: u32,
    linear_size: u32,
    marked_site: u64,
    t: f64,
    mu: f64,
    epsilon: f64,
    out: *mut *mut AdiaSystem,
) -> AdiaStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return AdiaStatus::NullPointer;
        }
        match new_system(
            dimension,
            linear_size,
            Boundary::Open,
            Some(marked_site as usize),
            t,
            mu,
            epsilon,
        ) {
            Ok(sys) => {
                unsafe { *out = Box::into_raw(Box::new(sys)) };
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a handle created by one of the constructors.
///
/// # Safety
/// `sys` must be a pointer returned by `adia_system_new_*`, not yet freed;
/// null is tolerated.
#[no_mangle]
pub unsafe extern "C" fn adia_system_free(sys: *mut AdiaSystem) {
    if !sys.is_null() {
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Number of lattice sites N = L^d.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn adia_system_sites(sys: *const AdiaSystem) -> u64 {
    if sys.is_null() {
        return 0;
    }
    unsafe { &*sys }.spec.site_count()
}

/// Evaluate E0, E1, gap, V01 and the integrand at one s.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adia_spectral_point(
    sys: *const AdiaSystem,
    s: f64,
    out: *mut AdiaSpectralPoint,
) -> AdiaStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            set_error("null pointer");
            return AdiaStatus::NullPointer;
        }
        let sys = unsafe { &*sys };
        let r = match &sys.model {
            Model::Periodic(m) => m.eval(s),
            Model::Open(m) => m.eval(s),
        };
        match r {
            Ok(p) => {
                unsafe {
                    *out = AdiaSpectralPoint {
                        s: p.s,
                        e0: p.e0,
                        e1: p.e1,
                        gap: p.gap,
                        v01: p.v01,
                        integrand: p.integrand,
                    }
                };
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Run the integrand pipeline and report peak metrics. `base_points = 0`
/// selects the default grid.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adia_peak_summary(
    sys: *const AdiaSystem,
    base_points: u32,
    out: *mut AdiaPeakSummary,
) -> AdiaStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            set_error("null pointer");
            return AdiaStatus::NullPointer;
        }
        let sys = unsafe { &*sys };
        let mut grid = GridConfig::default();
        if base_points > 0 {
            grid.base_points = base_points as usize;
        }
        let curve = match &sys.model {
            Model::Periodic(m) => sample_integrand(m, &grid),
            Model::Open(m) => sample_integrand(m, &grid),
        };
        let summary = curve.and_then(|c| summarize_peak(&c));
        match summary {
            Ok(p) => {
                unsafe {
                    *out = AdiaPeakSummary {
                        peak_height: p.h,
                        peak_location: p.s_peak,
                        s_minus: p.s_minus,
                        s_plus: p.s_plus,
                        width: p.width,
                        t_estimate: p.t_estimate,
                        t_lae: p.t_lae,
                        t_const: p.t_const,
                    }
                };
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Constant-rate evolution for a total time `t_total`; writes final
/// statistics to `out`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adia_evolve_constant_rate(
    sys: *const AdiaSystem,
    t_total: f64,
    out: *mut AdiaEvolution,
) -> AdiaStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            set_error("null pointer");
            return AdiaStatus::NullPointer;
        }
        let sys = unsafe { &*sys };
        let config = EvolutionConfig {
            spec: sys.spec.clone(),
            params: sys.params,
            total_time: t_total,
            schedule: ScheduleKind::ConstantRate,
            steps: StepControl::default(),
        };
        match evolve(&config) {
            Ok(r) => {
                unsafe {
                    *out = AdiaEvolution {
                        p0: r.p0,
                        norm_drift: r.norm_drift,
                        steps: r.steps as u64,
                        halving_delta: r.halving_delta,
                    }
                };
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Closed-form Grover-reference gap and matrix element.
///
/// # Safety
/// `gap_out` and `v01_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adia_grover_reference(
    n: u64,
    s: f64,
    gap_out: *mut f64,
    v01_out: *mut f64,
) -> AdiaStatus {
    guard(|| {
        if gap_out.is_null() || v01_out.is_null() {
            set_error("null pointer");
            return AdiaStatus::NullPointer;
        }
        match grover_reference(n, s) {
            Ok((g, v)) => {
                unsafe {
                    *gap_out = g;
                    *v01_out = v;
                }
                AdiaStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
