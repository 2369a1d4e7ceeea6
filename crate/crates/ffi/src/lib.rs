//! C ABI over `obstacle1d`.
//!
//! Every fallible call returns an [`ObsStatus`]; results come back through
//! out-pointers. Handles are opaque and must be released with the matching
//! `*_free` function. After a failure, [`obs_last_error_message`] returns a
//! description for the calling thread.
//!
//! # Safety
//!
//! All entry points share one contract: pointers are either null (reported
//! as `OBS_STATUS_NULL_POINTER`) or valid for the length passed alongside
//! them, and handles come from this library and are freed exactly once.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use obstacle1d::{
    efficiency_indices, minimize_majorant, project_to_feasible, uzawa_solve, Error, ExactSolution,
    InnerSolver, MajorantConfig, MajorantResult, Mesh, PiecewiseLinear, ProblemSpec, UzawaConfig,
    UzawaResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidMesh = 3,
    IncompatibleMesh = 4,
    SingularSystem = 5,
    Infeasible = 6,
    UndefinedIndex = 7,
    BufferTooSmall = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsInnerSolver {
    ActiveSet = 0,
    Sweeps = 1,
}

/// Parameters for [`obs_majorant_minimize`]. Obtain defaults from
/// [`obs_majorant_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ObsMajorantConfig {
    pub n_iterations: usize,
    /// Iterations after which beta is recomputed; may be null when
    /// `n_beta_updates` is 0.
    pub beta_updates: *const usize,
    pub n_beta_updates: usize,
    pub beta0: f64,
    pub mu0: f64,
    pub c_constant: f64,
    pub inner: ObsInnerSolver,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ObsBreakdown {
    pub beta: f64,
    pub term_flux: f64,
    pub term_residual: f64,
    pub term_obstacle: f64,
    pub total: f64,
}

pub struct ObsMesh(Arc<Mesh>);
pub struct ObsUzawa(UzawaResult);
pub struct ObsMajorant(MajorantResult);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> ObsStatus {
    match err {
        Error::InvalidMesh(_) => ObsStatus::InvalidMesh,
        Error::IncompatibleMesh | Error::LengthMismatch { .. } => ObsStatus::IncompatibleMesh,
        Error::SingularSystem { .. } => ObsStatus::SingularSystem,
        Error::Infeasible(_) => ObsStatus::Infeasible,
        Error::UndefinedIndex(_) => ObsStatus::UndefinedIndex,
        Error::Io(_) | Error::Parse(_) => ObsStatus::Io,
        Error::Row { source, .. } => status_of(source),
        Error::InvalidSpec(_)
        | Error::Domain(_)
        | Error::InvalidParameter(_)
        | Error::InvalidMultiplier { .. } => ObsStatus::InvalidArgument,
    }
}

struct Fail(ObsStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn fail<T>(status: ObsStatus, msg: &str) -> Result<T, Fail> {
    set_error(msg.to_string());
    Err(Fail(status))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> ObsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ObsStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(_) => {
            set_error("internal panic".into());
            ObsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    match p.as_ref() {
        Some(r) => Ok(r),
        None => fail(ObsStatus::NullPointer, &format!("null {what}")),
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return fail(ObsStatus::NullPointer, &format!("null {what}"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return fail(ObsStatus::NullPointer, "null output pointer");
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return fail(ObsStatus::NullPointer, "null output buffer");
    }
    if len < src.len() {
        return fail(
            ObsStatus::BufferTooSmall,
            &format!("buffer holds {len} values, need {}", src.len()),
        );
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

unsafe fn nodal(
    mesh: *const ObsMesh,
    values: *const f64,
    len: usize,
) -> Result<PiecewiseLinear, Fail> {
    let mesh = deref(mesh, "mesh")?;
    let values = slice(values, len, "values")?;
    Ok(PiecewiseLinear::new(mesh.0.clone(), values.to_vec())?)
}

/// Copies the thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
#[no_mangle]
pub unsafe extern "C" fn obs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Uniform mesh of `n_nodes` points on [0, 1].
#[no_mangle]
pub unsafe extern "C" fn obs_mesh_uniform(n_nodes: usize, out: *mut *mut ObsMesh) -> ObsStatus {
    guard(|| {
        let mesh = Mesh::uniform(n_nodes)?;
        write_out(out, Box::into_raw(Box::new(ObsMesh(Arc::new(mesh)))))
    })
}

/// Mesh through the given strictly increasing nodes from 0 to 1.
#[no_mangle]
pub unsafe extern "C" fn obs_mesh_from_nodes(
    nodes: *const f64,
    len: usize,
    out: *mut *mut ObsMesh,
) -> ObsStatus {
    guard(|| {
        let nodes = slice(nodes, len, "nodes")?;
        let mesh = Mesh::from_nodes(nodes.to_vec())?;
        write_out(out, Box::into_raw(Box::new(ObsMesh(Arc::new(mesh)))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn obs_mesh_n_nodes(mesh: *const ObsMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.n_nodes())
}

#[no_mangle]
pub unsafe extern "C" fn obs_mesh_free(mesh: *mut ObsMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Minimum energy `J(u)` of the constant-data benchmark (`f < 0`, `phi < 0`).
#[no_mangle]
pub unsafe extern "C" fn obs_exact_energy(f: f64, phi: f64, out: *mut f64) -> ObsStatus {
    guard(|| {
        let exact = ExactSolution::new(ProblemSpec::new(f, phi)?)?;
        write_out(out, exact.energy())
    })
}

/// `½‖v − u‖²_E` for nodal values `values` on `mesh`.
#[no_mangle]
pub unsafe extern "C" fn obs_half_energy_error(
    f: f64,
    phi: f64,
    mesh: *const ObsMesh,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ObsStatus {
    guard(|| {
        let v = nodal(mesh, values, len)?;
        let exact = ExactSolution::new(ProblemSpec::new(f, phi)?)?;
        write_out(out, exact.half_energy_error(&v))
    })
}

/// `J(v) − J(u)` for nodal values `values` on `mesh`.
#[no_mangle]
pub unsafe extern "C" fn obs_energy_gap(
    f: f64,
    phi: f64,
    mesh: *const ObsMesh,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> ObsStatus {
    guard(|| {
        let v = nodal(mesh, values, len)?;
        let exact = ExactSolution::new(ProblemSpec::new(f, phi)?)?;
        write_out(out, exact.energy_gap(&v))
    })
}

#[no_mangle]
pub unsafe extern "C" fn obs_efficiency_indices(
    half_err: f64,
    gap: f64,
    majorant: f64,
    energy_index: *mut f64,
    majorant_index: *mut f64,
) -> ObsStatus {
    guard(|| {
        let (a, b) = efficiency_indices(half_err, gap, majorant)?;
        write_out(energy_index, a)?;
        write_out(majorant_index, b)
    })
}

#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_solve(
    f: f64,
    phi: f64,
    mesh: *const ObsMesh,
    rho: f64,
    n_iterations: usize,
    out: *mut *mut ObsUzawa,
) -> ObsStatus {
    guard(|| {
        let mesh = deref(mesh, "mesh")?;
        let spec = ProblemSpec::new(f, phi)?;
        let config = UzawaConfig {
            rho,
            n_iterations,
            snapshots: Vec::new(),
        };
        let res = uzawa_solve(&spec, mesh.0.clone(), &config)?;
        write_out(out, Box::into_raw(Box::new(ObsUzawa(res))))
    })
}

/// Raw nodal values of the final iterate.
#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_values(
    h: *const ObsUzawa,
    buf: *mut f64,
    len: usize,
) -> ObsStatus {
    guard(|| copy_out(deref(h, "handle")?.0.v.values(), buf, len))
}

/// Nodal values of the final iterate clamped to `v ≥ phi`.
#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_feasible_values(
    h: *const ObsUzawa,
    phi: f64,
    buf: *mut f64,
    len: usize,
) -> ObsStatus {
    guard(|| {
        let v = project_to_feasible(&deref(h, "handle")?.0.v, phi);
        copy_out(v.values(), buf, len)
    })
}

/// Elementwise multiplier, one value per element.
#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_multiplier(
    h: *const ObsUzawa,
    buf: *mut f64,
    len: usize,
) -> ObsStatus {
    guard(|| copy_out(deref(h, "handle")?.0.mu.values(), buf, len))
}

#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_infeasibility(h: *const ObsUzawa, out: *mut f64) -> ObsStatus {
    guard(|| write_out(out, deref(h, "handle")?.0.infeasibility))
}

#[no_mangle]
pub unsafe extern "C" fn obs_uzawa_free(h: *mut ObsUzawa) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

static DEFAULT_BETA_UPDATES: [usize; 2] = [5_000, 10_000];

#[no_mangle]
pub extern "C" fn obs_majorant_config_default() -> ObsMajorantConfig {
    let d = MajorantConfig::default();
    ObsMajorantConfig {
        n_iterations: d.n_iterations,
        beta_updates: DEFAULT_BETA_UPDATES.as_ptr(),
        n_beta_updates: DEFAULT_BETA_UPDATES.len(),
        beta0: d.beta0,
        mu0: d.mu0,
        c_constant: d.c_constant,
        inner: ObsInnerSolver::ActiveSet,
    }
}

/// Minimizes the majorant for the feasible nodal approximation `values`.
#[no_mangle]
pub unsafe extern "C" fn obs_majorant_minimize(
    f: f64,
    phi: f64,
    mesh: *const ObsMesh,
    values: *const f64,
    len: usize,
    config: *const ObsMajorantConfig,
    out: *mut *mut ObsMajorant,
) -> ObsStatus {
    guard(|| {
        let v = nodal(mesh, values, len)?;
        let spec = ProblemSpec::new(f, phi)?;
        let c = deref(config, "config")?;
        let updates = if c.n_beta_updates == 0 {
            Vec::new()
        } else {
            let p = c.beta_updates;
            if p.is_null() {
                return fail(ObsStatus::NullPointer, "null beta_updates");
            }
            std::slice::from_raw_parts(p, c.n_beta_updates).to_vec()
        };
        let config = MajorantConfig {
            n_iterations: c.n_iterations,
            beta_update_iterations: updates,
            beta0: c.beta0,
            mu0: c.mu0,
            c_constant: c.c_constant,
            inner: match c.inner {
                ObsInnerSolver::ActiveSet => InnerSolver::ActiveSet,
                ObsInnerSolver::Sweeps => InnerSolver::Sweeps,
            },
            ..MajorantConfig::default()
        };
        let res = minimize_majorant(&v, &spec, &config)?;
        write_out(out, Box::into_raw(Box::new(ObsMajorant(res))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn obs_majorant_breakdown(
    h: *const ObsMajorant,
    out: *mut ObsBreakdown,
) -> ObsStatus {
    guard(|| {
        let b = deref(h, "handle")?.0.breakdown;
        write_out(
            out,
            ObsBreakdown {
                beta: b.beta,
                term_flux: b.term_flux,
                term_residual: b.term_residual,
                term_obstacle: b.term_obstacle,
                total: b.total,
            },
        )
    })
}

/// Nodal values of the optimal flux.
#[no_mangle]
pub unsafe extern "C" fn obs_majorant_flux(
    h: *const ObsMajorant,
    buf: *mut f64,
    len: usize,
) -> ObsStatus {
    guard(|| copy_out(deref(h, "handle")?.0.tau.values(), buf, len))
}

/// Elementwise optimal multiplier.
#[no_mangle]
pub unsafe extern "C" fn obs_majorant_multiplier(
    h: *const ObsMajorant,
    buf: *mut f64,
    len: usize,
) -> ObsStatus {
    guard(|| copy_out(deref(h, "handle")?.0.mu.values(), buf, len))
}

#[no_mangle]
pub unsafe extern "C" fn obs_majorant_free(h: *mut ObsMajorant) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
