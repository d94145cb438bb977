//! C ABI for the `massratio` library.
//!
//! Every function returns an [`MrStatus`] and writes results through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`mr_last_error_message`]. Solutions and sweeps are opaque handles owned
//! by the caller and released with the matching `*_free` function. Panics
//! never cross the boundary; they surface as [`MrStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use massratio::bessel::{self, BesselFamily};
use massratio::bvp::{solve_logistic, LogisticProblem, DEFAULT_TOL};
use massratio::eigen;
use massratio::grid::{l1_ratio, make_grid, Domain, GridFunction};
use massratio::operator::Boundary;
use massratio::subsuper::{self, ConstantsPoint};
use massratio::sweep::{self, ExportFormat, SweepConfig, SweepRecord};
use massratio::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrStatus {
    Ok = 0,
    InvalidParameter = 1,
    DegenerateResource = 2,
    NoPositiveSolution = 3,
    NumericalFailure = 4,
    InsufficientData = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Boundary condition at `r = 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrBoundary {
    Dirichlet = 0,
    Neumann = 1,
}

/// Bessel function family for zero lookups.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrBesselFamily {
    J0 = 0,
    J1 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrFormat {
    Csv = 0,
    Json = 1,
}

/// Plain copy of one sweep record. Missing values are NaN and `ok` is 0 for
/// failed records.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MrSweepRecord {
    pub n: u32,
    pub eps: f64,
    pub d: f64,
    pub lambda1: f64,
    pub ratio: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub grid_n: u64,
    pub wallclock_ms: f64,
    pub ok: i32,
}

/// Solution of one logistic problem.
pub struct MrSolution {
    nodes: Vec<f64>,
    values: Vec<f64>,
    ratio: f64,
    iterations: u64,
}

/// Records of one sweep, in descending `eps`.
pub struct MrSweep {
    records: Vec<SweepRecord>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> MrStatus {
    match err {
        Error::InvalidParameter(_) => MrStatus::InvalidParameter,
        Error::DegenerateResource(_) => MrStatus::DegenerateResource,
        Error::NoPositiveSolution(_) => MrStatus::NoPositiveSolution,
        Error::NumericalFailure(_) => MrStatus::NumericalFailure,
        Error::InsufficientData(_) => MrStatus::InsufficientData,
        Error::Io { .. } => MrStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> MrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            MrStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside massratio".into());
            MrStatus::Panic
        }
    }
}

fn null_error(what: &str) -> MrStatus {
    set_error(format!("null pointer: {what}"));
    MrStatus::NullPointer
}

macro_rules! require {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return null_error(stringify!($p));
        })+
    };
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mr_last_error_message(buf: *mut c_char, len: usize) -> usize {
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

/// `J_0(z)` for `0 <= z <= 50`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_bessel_j0(z: f64, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        *out = bessel::bessel_j0(z)?;
        Ok(())
    })
}

/// `J_1(z)` for `0 <= z <= 50`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_bessel_j1(z: f64, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        *out = bessel::bessel_j1(z)?;
        Ok(())
    })
}

/// The `k`-th positive zero (`1 <= k <= 8`).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_bessel_zero(family: MrBesselFamily, k: u32, out: *mut f64) -> MrStatus {
    require!(out);
    let family = match family {
        MrBesselFamily::J0 => BesselFamily::J0,
        MrBesselFamily::J1 => BesselFamily::J1,
    };
    guard(|| {
        *out = bessel::bessel_zero(family, k as usize)?;
        Ok(())
    })
}

/// `λ_k` of the interval spike of width `eps`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_lambda_k_interval(eps: f64, k: u32, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        *out = eigen::lambda_k_interval(eps, k as usize)?;
        Ok(())
    })
}

/// `λ_1` of the disc spike (`eps <= e^-2`).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_lambda1_ball2(eps: f64, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        *out = eigen::lambda1_ball2(eps)?;
        Ok(())
    })
}

/// `λ_1` of the spike in dimension `n` from the finite-volume discretization
/// with at least `intervals` grid intervals.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_lambda1_discrete(n: u32, eps: f64, intervals: u64, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        let n = n as usize;
        let grid = Arc::new(make_grid(Domain::for_dimension(n)?, intervals as usize, eps)?);
        let m = eigen::sample_spike(&eigen::SpikeProfile::new(n, eps)?, &grid)?;
        *out = eigen::lambda1_discrete(&m, n)?.lambda1;
        Ok(())
    })
}

/// Writes 1 to `out` if `(c1, c2)` lies in the admissible region, else 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_region_contains(n: u32, c1: f64, c2: f64, out: *mut i32) -> MrStatus {
    require!(out);
    guard(|| {
        let p = ConstantsPoint::new(n as usize, c1, c2)?;
        *out = subsuper::region_contains(&p) as i32;
        Ok(())
    })
}

/// `c2 (n/e |log eps| + 1 - 2/e)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_analytic_sub_ratio(n: u32, eps: f64, c2: f64, out: *mut f64) -> MrStatus {
    require!(out);
    guard(|| {
        *out = subsuper::analytic_sub_ratio(n as usize, eps, c2)?;
        Ok(())
    })
}

/// Solves `d Δu + u (m_eps - u) = 0` and stores a new handle in `out`.
///
/// # Safety
/// `out` must be valid for writes. The handle must be released with
/// [`mr_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn mr_solve_spike(
    n: u32,
    eps: f64,
    d: f64,
    bc: MrBoundary,
    intervals: u64,
    out: *mut *mut MrSolution,
) -> MrStatus {
    require!(out);
    *out = ptr::null_mut();
    guard(|| {
        let n = n as usize;
        let bc = match bc {
            MrBoundary::Dirichlet => Boundary::Dirichlet,
            MrBoundary::Neumann => Boundary::Neumann,
        };
        let size = sweep::grid_size(intervals as usize, eps.clamp(f64::MIN_POSITIVE, 1.0));
        let grid = Arc::new(make_grid(Domain::for_dimension(n)?, size, eps)?);
        let problem = LogisticProblem::spike(n, eps, d, bc, &grid)?;
        let report = solve_logistic(&problem, DEFAULT_TOL)?;
        let ratio = l1_ratio(&report.solution, problem.resource(), n)?;
        let solution = MrSolution {
            nodes: grid.nodes().to_vec(),
            values: GridFunction::into_values(report.solution),
            ratio,
            iterations: report.iterations as u64,
        };
        *out = Box::into_raw(Box::new(solution));
        Ok(())
    })
}

/// Number of grid nodes of a solution (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_len(h: *const MrSolution) -> usize {
    h.as_ref().map_or(0, |s| s.values.len())
}

/// `∫u / ∫m` of a solution (NaN for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_ratio(h: *const MrSolution) -> f64 {
    h.as_ref().map_or(f64::NAN, |s| s.ratio)
}

/// Solver iterations used (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_iterations(h: *const MrSolution) -> u64 {
    h.as_ref().map_or(0, |s| s.iterations)
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> MrStatus {
    if len < src.len() {
        set_error(format!("buffer holds {len} values, need {}", src.len()));
        return MrStatus::InvalidParameter;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    set_error(String::new());
    MrStatus::Ok
}

/// Copies the grid nodes into `buf`, which must hold
/// [`mr_solution_len`] values.
///
/// # Safety
/// `h` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_nodes(h: *const MrSolution, buf: *mut f64, len: usize) -> MrStatus {
    require!(h, buf);
    copy_out(&(*h).nodes, buf, len)
}

/// Copies the nodal solution values into `buf`.
///
/// # Safety
/// `h` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_values(h: *const MrSolution, buf: *mut f64, len: usize) -> MrStatus {
    require!(h, buf);
    copy_out(&(*h).values, buf, len)
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mr_solution_free(h: *mut MrSolution) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn eps_slice<'a>(eps: *const f64, count: usize) -> &'a [f64] {
    if count == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(eps, count)
    }
}

/// Interval sweep with `d = sqrt(eps)`.
///
/// # Safety
/// `eps` must be valid for `count` reads and `out` for writes. Release the
/// handle with [`mr_sweep_free`].
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_1d(
    eps: *const f64,
    count: usize,
    grid_n: u64,
    out: *mut *mut MrSweep,
) -> MrStatus {
    require!(eps, out);
    *out = ptr::null_mut();
    let list = eps_slice(eps, count).to_vec();
    guard(|| {
        let config = SweepConfig {
            grid_n: grid_n as usize,
            ..SweepConfig::default()
        };
        let records = sweep::sweep_1d(&list, &config)?;
        *out = Box::into_raw(Box::new(MrSweep { records }));
        Ok(())
    })
}

/// Ball sweep with `d = c1 / eps^(n-2)`.
///
/// # Safety
/// As [`mr_sweep_1d`].
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_nd(
    n: u32,
    c1: f64,
    c2: f64,
    eps: *const f64,
    count: usize,
    grid_n: u64,
    out: *mut *mut MrSweep,
) -> MrStatus {
    require!(eps, out);
    *out = ptr::null_mut();
    let list = eps_slice(eps, count).to_vec();
    guard(|| {
        let config = SweepConfig {
            grid_n: grid_n as usize,
            ..SweepConfig::default()
        };
        let records = sweep::sweep_nd(n as usize, c1, c2, &list, &config)?;
        *out = Box::into_raw(Box::new(MrSweep { records }));
        Ok(())
    })
}

/// Number of records (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_len(h: *const MrSweep) -> usize {
    h.as_ref().map_or(0, |s| s.records.len())
}

/// Copies record `index` into `out`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_record(
    h: *const MrSweep,
    index: usize,
    out: *mut MrSweepRecord,
) -> MrStatus {
    require!(h, out);
    let sweep = &*h;
    let Some(r) = sweep.records.get(index) else {
        set_error(format!("record {index} out of range"));
        return MrStatus::InvalidParameter;
    };
    let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
    *out = MrSweepRecord {
        n: r.n as u32,
        eps: r.eps,
        d: r.d,
        lambda1: nan(r.lambda1),
        ratio: nan(r.ratio),
        lower_bound: nan(r.lower_bound),
        upper_bound: nan(r.upper_bound),
        grid_n: r.grid_n as u64,
        wallclock_ms: r.wallclock_ms,
        ok: r.is_ok() as i32,
    };
    set_error(String::new());
    MrStatus::Ok
}

/// Writes the records to `path` as CSV or JSON.
///
/// # Safety
/// `h` must be a live handle and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_export(
    h: *const MrSweep,
    path: *const c_char,
    format: MrFormat,
) -> MrStatus {
    require!(h, path);
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8".into());
        return MrStatus::InvalidParameter;
    };
    let format = match format {
        MrFormat::Csv => ExportFormat::Csv,
        MrFormat::Json => ExportFormat::Json,
    };
    let records = &(*h).records;
    guard(|| sweep::export(records, format, Path::new(path)))
}

/// Releases a sweep handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mr_sweep_free(h: *mut MrSweep) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
