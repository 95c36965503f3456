//! C ABI over `vcwave`.
//!
//! Every function returns a [`VcwStatus`]; on failure the message is kept in
//! a thread-local slot readable with [`vcw_last_error`]. Handles are opaque
//! and must be released with their `_free` function. Panics never cross the
//! boundary: they are caught and reported as [`VcwStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vcwave::harness::{load_config, run_scenario, RunStatus};
use vcwave::profiles::{solve_contact_profile, BurgersWave, CompositeAnsatz, ContactProfile, ProfileOptions};
use vcwave::riemann::solve_wave_pattern;
use vcwave::{Error, GasParams, ThermoState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotInWaveRegion = 3,
    NoConvergence = 4,
    Profile = 5,
    Solver = 6,
    Diagnostics = 7,
    Config = 8,
    Io = 9,
    /// The run completed but its verdict is a failure.
    VerdictFailed = 10,
    Panic = 99,
}

/// Gas constants; `a <= 0` selects `a = r`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VcwGas {
    pub r: f64,
    pub gamma: f64,
    pub a: f64,
    pub mu_tilde: f64,
    pub kappa_tilde: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct VcwState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct VcwDecomposition {
    pub left: VcwState,
    pub left_mid: VcwState,
    pub right_mid: VcwState,
    pub right: VcwState,
    pub p_mid: f64,
    pub delta_r1: f64,
    pub delta_cd: f64,
    pub delta_r3: f64,
}

/// Opaque contact-wave profile.
pub struct VcwContactProfile(ContactProfile);

/// Opaque composite ansatz.
pub struct VcwAnsatz(CompositeAnsatz);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> VcwStatus {
    match e {
        Error::InvalidGas(_) | Error::InvalidState(_) | Error::InvalidCurveDirection { .. } => VcwStatus::InvalidArgument,
        Error::NotInR1CR3(_) => VcwStatus::NotInWaveRegion,
        Error::NoConvergence { .. } => VcwStatus::NoConvergence,
        Error::DomainTooSmall { .. } | Error::InvalidProfile(_) => VcwStatus::Profile,
        Error::NonPositiveInitialData { .. }
        | Error::PositivityLoss { .. }
        | Error::BoundaryUnavailable { .. }
        | Error::MaxStepsExceeded(_)
        | Error::InvalidSolverConfig(_) => VcwStatus::Solver,
        Error::DomainTooNarrow(_) | Error::InsufficientData(_) => VcwStatus::Diagnostics,
        Error::ParseError { .. } | Error::ValidationError(_) => VcwStatus::Config,
        Error::Io { .. } => VcwStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (VcwStatus, String)>) -> VcwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            VcwStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            VcwStatus::Panic
        }
    }
}

fn lib(e: Error) -> (VcwStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (VcwStatus, String) {
    (VcwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, (VcwStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, what: &str, value: T) -> Result<(), (VcwStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn gas_of(g: &VcwGas) -> Result<GasParams, (VcwStatus, String)> {
    let a = if g.a > 0.0 { g.a } else { g.r };
    GasParams::new(g.r, g.gamma, a, g.mu_tilde, g.kappa_tilde, g.alpha, g.beta).map_err(lib)
}

fn state_of(s: &VcwState) -> Result<ThermoState, (VcwStatus, String)> {
    ThermoState::new(s.v, s.u, s.theta).map_err(lib)
}

fn to_c(s: &ThermoState) -> VcwState {
    VcwState { v: s.v, u: s.u, theta: s.theta }
}

unsafe fn path_arg<'a>(p: *const c_char, what: &str) -> Result<&'a Path, (VcwStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| (VcwStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Monatomic gas (`R = 1`, `gamma = 5/3`, unit prefactors, `alpha = 0`).
#[no_mangle]
pub extern "C" fn vcw_gas_monatomic(beta: f64) -> VcwGas {
    VcwGas {
        r: 1.0,
        gamma: 5.0 / 3.0,
        a: 1.0,
        mu_tilde: 1.0,
        kappa_tilde: 1.0,
        alpha: 0.0,
        beta,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vcw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn vcw_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// R1-C-R3 decomposition of the Riemann problem `(left, right)`.
///
/// # Safety
/// All pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_riemann_solve(
    gas: *const VcwGas,
    left: *const VcwState,
    right: *const VcwState,
    tol: f64,
    out: *mut VcwDecomposition,
) -> VcwStatus {
    guard(|| {
        let g = gas_of(read(gas, "gas")?)?;
        let l = state_of(read(left, "left")?)?;
        let r = state_of(read(right, "right")?)?;
        let d = solve_wave_pattern(&l, &r, &g, tol).map_err(lib)?;
        write(
            out,
            "out",
            VcwDecomposition {
                left: to_c(&d.left),
                left_mid: to_c(&d.left_mid),
                right_mid: to_c(&d.right_mid),
                right: to_c(&d.right),
                p_mid: d.p_mid,
                delta_r1: d.strengths.r1,
                delta_cd: d.strengths.cd,
                delta_r3: d.strengths.r3,
            },
        )
    })
}

/// Burgers wave between `w_l <= w_r` at `(x, t)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_burgers_eval(w_l: f64, w_r: f64, x: f64, t: f64, out: *mut f64) -> VcwStatus {
    guard(|| {
        let w = BurgersWave::new(w_l, w_r).map_err(lib)?.eval(x, t).map_err(lib)?;
        write(out, "out", w)
    })
}

/// Solves the contact profile; `n_nodes = 0` or non-positive `l_xi`/`tol`
/// select the defaults.
///
/// # Safety
/// `gas` must be valid; `out` must be writable. Release with
/// [`vcw_contact_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn vcw_contact_profile_new(
    gas: *const VcwGas,
    theta_minus: f64,
    theta_plus: f64,
    p_plus: f64,
    l_xi: f64,
    n_nodes: usize,
    tol: f64,
    out: *mut *mut VcwContactProfile,
) -> VcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = gas_of(read(gas, "gas")?)?;
        let d = ProfileOptions::default();
        let opts = ProfileOptions {
            l_xi: if l_xi > 0.0 { l_xi } else { d.l_xi },
            n_nodes: if n_nodes > 0 { n_nodes } else { d.n_nodes },
            tol: if tol > 0.0 { tol } else { d.tol },
        };
        let p = solve_contact_profile(theta_minus, theta_plus, p_plus, &g, &opts).map_err(lib)?;
        *out = Box::into_raw(Box::new(VcwContactProfile(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`vcw_contact_profile_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn vcw_contact_profile_free(p: *mut VcwContactProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `(V, U, Theta)(x, t)` of the contact wave.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_contact_profile_eval(
    p: *const VcwContactProfile,
    x: f64,
    t: f64,
    out: *mut VcwState,
) -> VcwStatus {
    guard(|| {
        let p = &read(p, "profile")?.0;
        if t.is_nan() || t < 0.0 {
            return Err((VcwStatus::InvalidArgument, format!("t = {t} must be nonnegative")));
        }
        let (v, u, theta) = p.eval(x, t);
        write(out, "out", VcwState { v, u, theta })
    })
}

/// Largest discrete residual and fitted Gaussian decay rate.
///
/// # Safety
/// `p` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_contact_profile_info(
    p: *const VcwContactProfile,
    residual: *mut f64,
    decay_c1: *mut f64,
) -> VcwStatus {
    guard(|| {
        let p = &read(p, "profile")?.0;
        write(residual, "residual", p.max_residual())?;
        write(decay_c1, "decay_c1", p.decay_c1)
    })
}

/// Composite ansatz for the Riemann problem `(left, right)` with default
/// profile settings.
///
/// # Safety
/// Inputs must be valid; `out` must be writable. Release with [`vcw_ansatz_free`].
#[no_mangle]
pub unsafe extern "C" fn vcw_ansatz_new(
    gas: *const VcwGas,
    left: *const VcwState,
    right: *const VcwState,
    out: *mut *mut VcwAnsatz,
) -> VcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = gas_of(read(gas, "gas")?)?;
        let l = state_of(read(left, "left")?)?;
        let r = state_of(read(right, "right")?)?;
        let d = solve_wave_pattern(&l, &r, &g, 1e-10).map_err(lib)?;
        let a = CompositeAnsatz::new(&d, &g, &ProfileOptions::default()).map_err(lib)?;
        *out = Box::into_raw(Box::new(VcwAnsatz(a)));
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle from [`vcw_ansatz_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn vcw_ansatz_free(a: *mut VcwAnsatz) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_ansatz_eval(a: *const VcwAnsatz, x: f64, t: f64, out: *mut VcwState) -> VcwStatus {
    guard(|| {
        let s = read(a, "ansatz")?.0.eval(x, t).map_err(lib)?;
        write(out, "out", to_c(&s))
    })
}

/// Source terms `(F, G)` left by the ansatz in the momentum and energy equations.
///
/// # Safety
/// `a` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_ansatz_sources(
    a: *const VcwAnsatz,
    x: f64,
    t: f64,
    f: *mut f64,
    g: *mut f64,
) -> VcwStatus {
    guard(|| {
        let (fv, gv) = read(a, "ansatz")?.0.sources(x, t).map_err(lib)?;
        write(f, "f", fv)?;
        write(g, "g", gv)
    })
}

/// Loads a configuration file and runs it into `out_dir`. `passed` (may be
/// null) receives 1 on a passing verdict and 0 otherwise; a failing verdict
/// also returns [`VcwStatus::VerdictFailed`].
///
/// # Safety
/// Paths must be NUL-terminated UTF-8; `passed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn vcw_run_scenario(
    config_path: *const c_char,
    out_dir: *const c_char,
    passed: *mut c_int,
) -> VcwStatus {
    guard(|| {
        let cfg = load_config(path_arg(config_path, "config_path")?).map_err(lib)?;
        let m = run_scenario(&cfg, path_arg(out_dir, "out_dir")?).map_err(lib)?;
        let ok = m.status == RunStatus::Pass;
        if !passed.is_null() {
            *passed = c_int::from(ok);
        }
        if ok {
            Ok(())
        } else {
            Err((VcwStatus::VerdictFailed, format!("scenario {:?} failed its verdict", cfg.seed_label)))
        }
    })
}
