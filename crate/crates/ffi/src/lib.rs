//! C ABI for `filippov`.
//!
//! Objects cross the boundary as opaque handles created by `fl_*_load`,
//! `fl_*_parse` or `fl_simulate` and released with the matching `fl_*_free`.
//! Every fallible call returns an [`FlStatus`]; on anything but
//! `FL_STATUS_OK` a description is available from [`fl_last_error`] on the
//! same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use filippov::lyapunov::setvalued_derivative;
use filippov::run::ExitStatus;
use filippov::scenario::{load_scenario, parse_scenario, Mode, Scenario};
use filippov::simulate::{integrate, Trajectory};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    /// A requested check ran and failed.
    CheckFailed = 1,
    /// Integrator abort, evaluation error or I/O failure.
    RuntimeError = 2,
    NullPointer = 3,
    InvalidArgument = 4,
    /// The scenario could not be read or parsed.
    LoadError = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlMode {
    Check1 = 0,
    Check2 = 1,
    Simulate = 2,
    All = 3,
}

impl From<FlMode> for Mode {
    fn from(m: FlMode) -> Self {
        match m {
            FlMode::Check1 => Mode::Check1,
            FlMode::Check2 => Mode::Check2,
            FlMode::Simulate => Mode::Simulate,
            FlMode::All => Mode::All,
        }
    }
}

/// Opaque scenario handle.
pub struct FlScenario(Scenario);

/// Opaque trajectory handle.
pub struct FlTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FlStatus, message: impl Into<String>) -> FlStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> FlStatus) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(FlStatus::Panic, msg)
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, FlStatus> {
    if p.is_null() {
        return Err(fail(FlStatus::NullPointer, "string argument is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FlStatus::InvalidArgument, "string argument is not UTF-8"))
}

/// Message for the last failure on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_scenario_load(path: *const c_char, out: *mut *mut FlScenario) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return fail(FlStatus::NullPointer, "out is NULL");
        }
        let path = match c_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_scenario(Path::new(path)) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(FlScenario(s)));
                FlStatus::Ok
            }
            Err(e) => fail(FlStatus::LoadError, e.to_string()),
        }
    })
}

/// Parses scenario text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_scenario_parse(text: *const c_char, out: *mut *mut FlScenario) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return fail(FlStatus::NullPointer, "out is NULL");
        }
        let text = match c_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_scenario(text, "<memory>", "memory") {
            Ok(s) => {
                *out = Box::into_raw(Box::new(FlScenario(s)));
                FlStatus::Ok
            }
            Err(e) => fail(FlStatus::LoadError, e.to_string()),
        }
    })
}

/// # Safety
/// `scenario` must come from `fl_scenario_load`/`fl_scenario_parse` and not
/// have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_scenario_free(scenario: *mut FlScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// State dimension, or 0 for NULL.
///
/// # Safety
/// `scenario` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_scenario_dimension(scenario: *const FlScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.0.dimension)
}

/// Integrates the scenario's `[simulate]` section.
///
/// # Safety
/// `scenario` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_simulate(scenario: *const FlScenario, out: *mut *mut FlTrajectory) -> FlStatus {
    guard(|| {
        let (Some(s), false) = (scenario.as_ref(), out.is_null()) else {
            return fail(FlStatus::NullPointer, "scenario or out is NULL");
        };
        let Some(sim) = s.0.simulate.as_ref() else {
            return fail(FlStatus::InvalidArgument, "scenario has no [simulate] section");
        };
        match integrate(&s.0.field, &sim.x0, sim.t0, sim.tf, &sim.config) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(FlTrajectory(t)));
                FlStatus::Ok
            }
            Err(e) => fail(FlStatus::RuntimeError, e.to_string()),
        }
    })
}

/// # Safety
/// `trajectory` must come from `fl_simulate` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_trajectory_free(trajectory: *mut FlTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Number of samples, or 0 for NULL.
///
/// # Safety
/// `trajectory` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_trajectory_len(trajectory: *const FlTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.0.len())
}

/// Copies sample `index`: its time into `*t` and its state into `x[0..n)`.
///
/// # Safety
/// `trajectory` must be a live handle, `t` writable and `x` writable for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_trajectory_sample(
    trajectory: *const FlTrajectory,
    index: usize,
    t: *mut f64,
    x: *mut f64,
    n: usize,
) -> FlStatus {
    guard(|| {
        let Some(traj) = trajectory.as_ref() else {
            return fail(FlStatus::NullPointer, "trajectory is NULL");
        };
        if t.is_null() || x.is_null() {
            return fail(FlStatus::NullPointer, "output buffer is NULL");
        }
        let traj = &traj.0;
        if index >= traj.len() {
            return fail(FlStatus::InvalidArgument, format!("index {index} out of range 0..{}", traj.len()));
        }
        let state = &traj.states[index];
        if n != state.len() {
            return fail(FlStatus::InvalidArgument, format!("buffer holds {n} values, state has {}", state.len()));
        }
        *t = traj.times[index];
        ptr::copy_nonoverlapping(state.as_ptr(), x, n);
        FlStatus::Ok
    })
}

/// 1 if sample `index` is sliding on some surface, 0 if not, -1 on bad input.
///
/// # Safety
/// `trajectory` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_trajectory_sliding(trajectory: *const FlTrajectory, index: usize) -> c_int {
    match trajectory.as_ref() {
        Some(t) if index < t.0.len() => c_int::from(t.0.is_sliding(index)),
        _ => -1,
    }
}

/// Interval `[lower, upper]` of the set-valued derivative of the scenario's
/// candidate at `(x, t)`; `lower > upper` encodes the empty set.
///
/// # Safety
/// `scenario` must be a live handle, `x` readable for `n` doubles, and
/// `lower`/`upper` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_setvalued_derivative(
    scenario: *const FlScenario,
    x: *const f64,
    n: usize,
    t: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> FlStatus {
    guard(|| {
        let Some(s) = scenario.as_ref() else {
            return fail(FlStatus::NullPointer, "scenario is NULL");
        };
        if x.is_null() || lower.is_null() || upper.is_null() {
            return fail(FlStatus::NullPointer, "pointer argument is NULL");
        }
        let s = &s.0;
        if n != s.dimension {
            return fail(FlStatus::InvalidArgument, format!("x has {n} entries, expected {}", s.dimension));
        }
        let point = std::slice::from_raw_parts(x, n);
        match setvalued_derivative(&s.v, &s.field, point, t, s.tolerances.surface_tol, s.tolerances.xi_resolution) {
            Ok(d) => {
                *lower = d.lower;
                *upper = d.upper;
                FlStatus::Ok
            }
            Err(e) => fail(FlStatus::RuntimeError, e.to_string()),
        }
    })
}

/// Runs the pipeline and writes its files into `outdir`.
///
/// Returns `FL_STATUS_OK`, `FL_STATUS_CHECK_FAILED` or `FL_STATUS_RUNTIME_ERROR`,
/// matching the command-line exit codes 0, 1 and 2.
///
/// # Safety
/// `scenario` must be a live handle and `outdir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fl_run(scenario: *const FlScenario, mode: FlMode, outdir: *const c_char) -> FlStatus {
    guard(|| {
        let Some(s) = scenario.as_ref() else {
            return fail(FlStatus::NullPointer, "scenario is NULL");
        };
        let dir = match c_str(outdir) {
            Ok(d) => d,
            Err(st) => return st,
        };
        match filippov::run(&s.0, mode.into(), Path::new(dir)) {
            Ok(report) => match report.exit {
                ExitStatus::Pass => FlStatus::Ok,
                ExitStatus::CheckFailed => fail(FlStatus::CheckFailed, format!("failed checks: {}", report.failures.join(", "))),
                ExitStatus::RuntimeError => fail(FlStatus::RuntimeError, "runtime error"),
            },
            Err(e) => fail(FlStatus::RuntimeError, e.to_string()),
        }
    })
}
