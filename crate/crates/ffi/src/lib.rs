//! C ABI over the `ptbox` simulator.
//!
//! Simulations are opaque handles created by one of the `ptbox_simulation_new*`
//! functions and released with [`ptbox_simulation_free`]. Every fallible call
//! returns a [`PtboxStatus`]; on failure the message is available from
//! [`ptbox_last_error_message`] on the same thread until the next failing call.
//!
//! The header `include/ptbox.h` is regenerated by the build script.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ptbox::berry::berry_phase;
use ptbox::config::{parse_config, InitialState, SimulationConfig, StepControl};
use ptbox::output::{observables_csv, write_file};
use ptbox::spectrum::static_eigenvalue;
use ptbox::{integrate, Error, ObservableSeries, WallTrajectory};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtboxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numerical = 4,
    Io = 5,
    NotRun = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtboxWallKind {
    Static = 0,
    Harmonic = 1,
    Expanding = 2,
    Contracting = 3,
}

/// Observables of one sample.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PtboxObservables {
    pub t: f64,
    pub length: f64,
    pub velocity: f64,
    pub norm: f64,
    pub energy: f64,
    pub energy_over_norm: f64,
    pub force: f64,
    pub position: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PtboxBerryPhase {
    pub analytic_re: f64,
    pub analytic_im: f64,
    pub numeric_re: f64,
    pub numeric_im: f64,
    pub discrepancy: f64,
}

/// Opaque simulation handle.
pub struct PtboxSimulation {
    config: SimulationConfig,
    series: Option<ObservableSeries>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(e: &Error) -> PtboxStatus {
    match e {
        Error::Config { .. } => PtboxStatus::Config,
        Error::InvalidParameter { .. }
        | Error::OutsideBox { .. }
        | Error::NotPtSymmetric { .. } => PtboxStatus::InvalidArgument,
        Error::Io { .. } => PtboxStatus::Io,
        Error::WallCollapsed { .. }
        | Error::StepUnderflow { .. }
        | Error::NonFinite { .. }
        | Error::QuadratureNotConverged { .. } => PtboxStatus::Numerical,
    }
}

fn fail(status: PtboxStatus, message: impl Into<String>) -> PtboxStatus {
    set_error(message.into());
    status
}

/// Runs `body`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), PtboxStatus>>(body: F) -> PtboxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PtboxStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PtboxStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: ptbox::Result<T>) -> Result<T, PtboxStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, PtboxStatus> {
    if path.is_null() {
        return Err(fail(PtboxStatus::NullPointer, "path is NULL"));
    }
    let s = CStr::from_ptr(path)
        .to_str()
        .map_err(|_| fail(PtboxStatus::InvalidArgument, "path is not valid UTF-8"))?;
    Ok(Path::new(s))
}

unsafe fn store_handle(out: *mut *mut PtboxSimulation, config: SimulationConfig) {
    *out = Box::into_raw(Box::new(PtboxSimulation {
        config,
        series: None,
    }));
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ptbox_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ptbox_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a simulation from a TOML config file (or a JSON run manifest).
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_from_config_file(
    path: *const c_char,
    out: *mut *mut PtboxSimulation,
) -> PtboxStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(PtboxStatus::NullPointer, "out is NULL"));
        }
        let cfg = lift(parse_config(path_arg(path)?))?;
        store_handle(out, cfg.simulation);
        Ok(())
    })
}

/// Creates a simulation starting in cosine mode `initial_mode`.
/// `omega` is ignored for non-harmonic walls, `b` for static ones.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ptbox_simulation_new(
    kind: PtboxWallKind,
    a: f64,
    b: f64,
    omega: f64,
    alpha: f64,
    n_modes: usize,
    t_final: f64,
    dt: f64,
    sample_interval: f64,
    initial_mode: usize,
    out: *mut *mut PtboxSimulation,
) -> PtboxStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(PtboxStatus::NullPointer, "out is NULL"));
        }
        let trajectory = match kind {
            PtboxWallKind::Static => WallTrajectory::Static { a },
            PtboxWallKind::Harmonic => WallTrajectory::Harmonic { a, b, omega },
            PtboxWallKind::Expanding => WallTrajectory::Expanding { a, b },
            PtboxWallKind::Contracting => WallTrajectory::Contracting { a, b },
        };
        let config = SimulationConfig {
            trajectory,
            alpha,
            n_modes,
            t_final,
            step: StepControl::Fixed { dt },
            initial: InitialState::NeumannMode(initial_mode),
            sample_interval,
        };
        lift(config.validate())?;
        store_handle(out, config);
        Ok(())
    })
}

/// Integrates the configured run; previous results are replaced.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_run(sim: *mut PtboxSimulation) -> PtboxStatus {
    guard(|| {
        let sim = sim
            .as_mut()
            .ok_or_else(|| fail(PtboxStatus::NullPointer, "simulation is NULL"))?;
        let record = lift(integrate(&sim.config))?;
        sim.series = Some(lift(ObservableSeries::from_record(&record))?);
        Ok(())
    })
}

/// Number of recorded samples; 0 before a successful run or for NULL.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_sample_count(sim: *const PtboxSimulation) -> usize {
    sim.as_ref()
        .and_then(|s| s.series.as_ref())
        .map_or(0, |s| s.rows.len())
}

/// Number of basis modes (population columns).
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_mode_count(sim: *const PtboxSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.config.n_modes)
}

unsafe fn finished<'a>(sim: *const PtboxSimulation) -> Result<&'a ObservableSeries, PtboxStatus> {
    let sim = sim
        .as_ref()
        .ok_or_else(|| fail(PtboxStatus::NullPointer, "simulation is NULL"))?;
    sim.series
        .as_ref()
        .ok_or_else(|| fail(PtboxStatus::NotRun, "simulation has not been run"))
}

/// Copies the observables of sample `index` into `out`.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_observables(
    sim: *const PtboxSimulation,
    index: usize,
    out: *mut PtboxObservables,
) -> PtboxStatus {
    guard(|| {
        let series = finished(sim)?;
        let out = out
            .as_mut()
            .ok_or_else(|| fail(PtboxStatus::NullPointer, "out is NULL"))?;
        let row = series.rows.get(index).ok_or_else(|| {
            fail(
                PtboxStatus::OutOfRange,
                format!("sample {index} of {}", series.rows.len()),
            )
        })?;
        *out = PtboxObservables {
            t: row.t,
            length: row.length,
            velocity: row.velocity,
            norm: row.norm,
            energy: row.energy,
            energy_over_norm: row.energy_over_norm,
            force: row.force,
            position: row.position,
        };
        Ok(())
    })
}

/// Copies |C_n|² of sample `index` into `buffer`, which must hold `len` doubles
/// with `len` ≥ the mode count.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_populations(
    sim: *const PtboxSimulation,
    index: usize,
    buffer: *mut f64,
    len: usize,
) -> PtboxStatus {
    guard(|| {
        let series = finished(sim)?;
        if buffer.is_null() {
            return Err(fail(PtboxStatus::NullPointer, "buffer is NULL"));
        }
        let row = series
            .rows
            .get(index)
            .ok_or_else(|| fail(PtboxStatus::OutOfRange, format!("sample {index}")))?;
        if len < row.populations.len() {
            return Err(fail(
                PtboxStatus::OutOfRange,
                format!("buffer holds {len}, need {}", row.populations.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buffer, row.populations.len())
            .copy_from_slice(&row.populations);
        Ok(())
    })
}

/// Writes the observables table as CSV.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_write_csv(
    sim: *const PtboxSimulation,
    path: *const c_char,
) -> PtboxStatus {
    guard(|| {
        let series = finished(sim)?;
        let path = path_arg(path)?;
        lift(write_file(path, &observables_csv(series)))
    })
}

/// Releases a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ptbox_simulation_free(sim: *mut PtboxSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// E_n = π²n²/(2L²) of the static box.
#[no_mangle]
pub unsafe extern "C" fn ptbox_static_eigenvalue(
    n: u32,
    length: f64,
    out: *mut f64,
) -> PtboxStatus {
    guard(|| {
        let out = out
            .as_mut()
            .ok_or_else(|| fail(PtboxStatus::NullPointer, "out is NULL"))?;
        *out = lift(static_eigenvalue(n, length))?;
        Ok(())
    })
}

/// Geometric phase for L(t) = a + b cos(ωt), closed form and quadrature.
#[no_mangle]
pub unsafe extern "C" fn ptbox_berry_phase(
    n: u32,
    a: f64,
    b: f64,
    alpha: f64,
    omega: f64,
    steps: usize,
    out: *mut PtboxBerryPhase,
) -> PtboxStatus {
    guard(|| {
        let out = out
            .as_mut()
            .ok_or_else(|| fail(PtboxStatus::NullPointer, "out is NULL"))?;
        let r = lift(berry_phase(n, a, b, alpha, omega, steps))?;
        *out = PtboxBerryPhase {
            analytic_re: r.gamma_analytic.re,
            analytic_im: r.gamma_analytic.im,
            numeric_re: r.gamma_numeric.re,
            numeric_im: r.gamma_numeric.im,
            discrepancy: r.discrepancy,
        };
        Ok(())
    })
}
