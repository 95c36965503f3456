//! Explicit staggered-grid solver for the Lagrangian Navier–Stokes system
//!
//! ```text
//! v_t - u_x = 0
//! u_t + p_x = (mu u_x / v)_x
//! c_nu theta_t + p u_x = (kappa theta_x / v)_x + mu u_x^2 / v
//! ```
//!
//! `v` and `theta` live at cell centers, `u` at cell edges. Time stepping is
//! Heun's method (two-stage SSP Runge–Kutta); both ends are Dirichlet to a
//! time-dependent far field.

pub mod manufactured;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasParams, ThermoState};
use crate::profiles::CompositeAnsatz;

pub use manufactured::Manufactured;

/// Uniform grid on `[x_min, x_max]`. Coordinates are computed from the
/// nearer end so that a symmetric grid is exactly mirror-symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    dx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl TryFrom<GridSpec> for Grid1D {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Grid1D::new(s.x_min, s.x_max, s.n_cells)
    }
}

impl From<Grid1D> for GridSpec {
    fn from(g: Grid1D) -> Self {
        GridSpec {
            x_min: g.x_min,
            x_max: g.x_max,
            n_cells: g.n_cells,
        }
    }
}

impl Grid1D {
    pub const MIN_CELLS: usize = 16;

    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidSolverConfig(format!("grid needs x_min < x_max (got {x_min}, {x_max})")));
        }
        if n_cells < Self::MIN_CELLS {
            return Err(Error::InvalidSolverConfig(format!(
                "grid needs at least {} cells (got {n_cells})",
                Self::MIN_CELLS
            )));
        }
        Ok(Grid1D {
            x_min,
            x_max,
            n_cells,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Same domain with `factor` times as many cells.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Grid1D::new(self.x_min, self.x_max, self.n_cells * factor)
    }

    #[inline]
    pub fn edge(&self, j: usize) -> f64 {
        if 2 * j <= self.n_cells {
            self.x_min + j as f64 * self.dx
        } else {
            self.x_max - (self.n_cells - j) as f64 * self.dx
        }
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        if 2 * i < self.n_cells {
            self.x_min + (i as f64 + 0.5) * self.dx
        } else {
            self.x_max - ((self.n_cells - i) as f64 - 0.5) * self.dx
        }
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|j| self.edge(j)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    AnsatzDirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "SolverConfig::default_cfl")]
    pub cfl: f64,
    #[serde(default = "SolverConfig::default_diff_safety")]
    pub diff_safety: f64,
    pub t_end: f64,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "SolverConfig::default_max_steps")]
    pub max_steps: usize,
    /// Diagnostics cadence in simulated time; records are also taken at
    /// `t = 0`, every snapshot time and `t_end`.
    #[serde(default = "SolverConfig::default_record_interval")]
    pub record_interval: f64,
}

impl SolverConfig {
    fn default_cfl() -> f64 {
        0.5
    }
    fn default_diff_safety() -> f64 {
        0.9
    }
    fn default_max_steps() -> usize {
        10_000_000
    }
    fn default_record_interval() -> f64 {
        0.25
    }

    pub fn new(t_end: f64) -> Self {
        SolverConfig {
            cfl: Self::default_cfl(),
            diff_safety: Self::default_diff_safety(),
            t_end,
            boundary: Boundary::AnsatzDirichlet,
            snapshot_times: Vec::new(),
            max_steps: Self::default_max_steps(),
            record_interval: Self::default_record_interval(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSolverConfig(m));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.diff_safety > 0.0 && self.diff_safety <= 1.0) {
            return bad(format!("diff_safety must lie in (0, 1], got {}", self.diff_safety));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be finite and nonnegative, got {}", self.t_end));
        }
        if !(self.record_interval > 0.0) {
            return bad(format!("record_interval must be positive, got {}", self.record_interval));
        }
        if self.snapshot_times.iter().any(|&t| !(t >= 0.0 && t <= self.t_end)) {
            return bad("snapshot_times must lie in [0, t_end]".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        Ok(())
    }
}

/// Source of boundary data (and, for manufactured solutions, forcing).
pub trait FarField {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState>;

    /// Volumetric forcing `(s_v, s_u, s_theta)` added to the mass, momentum
    /// and temperature equations (the last one before division by `c_nu`).
    fn source(&self, _x: f64, _t: f64) -> (f64, f64, f64) {
        (0.0, 0.0, 0.0)
    }

    fn has_source(&self) -> bool {
        false
    }
}

impl FarField for CompositeAnsatz {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState> {
        self.eval(x, t).map_err(|_| Error::BoundaryUnavailable { x, t })
    }
}

impl<T: FarField + ?Sized> FarField for &T {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState> {
        (**self).state_at(x, t)
    }
    fn source(&self, x: f64, t: f64) -> (f64, f64, f64) {
        (**self).source(x, t)
    }
    fn has_source(&self) -> bool {
        (**self).has_source()
    }
}

/// Spatially uniform far field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform(pub ThermoState);

impl FarField for Uniform {
    fn state_at(&self, _x: f64, _t: f64) -> Result<ThermoState> {
        Ok(self.0)
    }
}

/// Mirror image `x -> -x`, `u -> -u` of another far field.
#[derive(Debug, Clone, Copy)]
pub struct Reflected<B>(pub B);

impl<B: FarField> FarField for Reflected<B> {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState> {
        let s = self.0.state_at(-x, t)?;
        Ok(ThermoState { u: -s.u, ..s })
    }
    fn source(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let (a, b, c) = self.0.source(-x, t);
        (a, -b, c)
    }
    fn has_source(&self) -> bool {
        self.0.has_source()
    }
}

/// Running totals for the conservation check: integrals at `t = 0` and the
/// accumulated boundary (and forcing) fluxes since then.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservationLedger {
    pub mass0: f64,
    pub momentum0: f64,
    pub mass_flux: f64,
    pub momentum_flux: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub step_count: usize,
    pub ledger: ConservationLedger,
}

impl SimulationState {
    /// `dx * sum v` over cells.
    pub fn mass(&self, grid: &Grid1D) -> f64 {
        grid.dx() * self.v.iter().sum::<f64>()
    }

    /// `dx * sum u` over interior edges (the boundary edges are prescribed).
    pub fn momentum(&self, grid: &Grid1D) -> f64 {
        grid.dx() * self.u[1..self.u.len() - 1].iter().sum::<f64>()
    }

    /// Mass change not explained by boundary fluxes, relative to the initial mass.
    pub fn mass_drift(&self, grid: &Grid1D) -> f64 {
        let l = &self.ledger;
        (self.mass(grid) - l.mass0 - l.mass_flux) / l.mass0.abs().max(f64::MIN_POSITIVE)
    }

    /// Momentum change not explained by boundary and forcing fluxes, relative
    /// to `(x_max - x_min) * max(1, max|u|)`.
    pub fn momentum_drift(&self, grid: &Grid1D) -> f64 {
        let l = &self.ledger;
        let umax = self.u.iter().fold(1.0f64, |m, &u| m.max(u.abs()));
        (self.momentum(grid) - l.momentum0 - l.momentum_flux) / ((grid.x_max() - grid.x_min()) * umax)
    }

    pub fn min_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }
    pub fn max_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
    pub fn min_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::INFINITY, f64::min)
    }
    pub fn max_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Samples `far(x, 0) + perturbation(x)` on the grid.
pub fn initialize<F, P>(far: &F, perturbation: P, grid: &Grid1D, g: &GasParams) -> Result<SimulationState>
where
    F: FarField + ?Sized,
    P: Fn(f64) -> (f64, f64, f64),
{
    let _ = g;
    let n = grid.n_cells();
    let mut v = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid.center(i);
        let s = far.state_at(x, 0.0)?;
        let (dv, _, dth) = perturbation(x);
        let (vi, ti) = (s.v + dv, s.theta + dth);
        if !(vi > 0.0 && vi.is_finite()) {
            return Err(Error::NonPositiveInitialData { x, field: "v", value: vi });
        }
        if !(ti > 0.0 && ti.is_finite()) {
            return Err(Error::NonPositiveInitialData { x, field: "theta", value: ti });
        }
        v.push(vi);
        theta.push(ti);
    }
    let mut u = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = grid.edge(j);
        let s = far.state_at(x, 0.0)?;
        // boundary edges are Dirichlet data: no perturbation there
        let du = if j == 0 || j == n { 0.0 } else { perturbation(x).1 };
        let uj = s.u + du;
        if !uj.is_finite() {
            return Err(Error::NonPositiveInitialData { x, field: "u", value: uj });
        }
        u.push(uj);
    }
    let mut s = SimulationState {
        t: 0.0,
        v,
        u,
        theta,
        step_count: 0,
        ledger: ConservationLedger::default(),
    };
    s.ledger.mass0 = s.mass(grid);
    s.ledger.momentum0 = s.momentum(grid);
    Ok(s)
}

/// Largest stable step: acoustic CFL with the Lagrangian sound speed
/// `sqrt(gamma p / v)` and the explicit parabolic limits of both diffusions.
pub fn stable_dt(s: &SimulationState, grid: &Grid1D, cfg: &SolverConfig, g: &GasParams) -> f64 {
    let dx = grid.dx();
    let mut dt = f64::INFINITY;
    for (&v, &th) in s.v.iter().zip(&s.theta) {
        let c = (g.gamma() * g.r() * th / (v * v)).sqrt();
        let hyper = cfl_limit(cfg.cfl, dx, c);
        let diff = v * g.c_nu() / g.conductivity(th);
        let visc = v / g.viscosity(th);
        let para = cfg.diff_safety * dx * dx * diff.min(visc) / 2.0;
        dt = dt.min(hyper).min(para);
    }
    dt
}

#[inline]
fn cfl_limit(cfl: f64, dx: f64, c: f64) -> f64 {
    if c > 0.0 {
        cfl * dx / c
    } else {
        f64::INFINITY
    }
}

/// Reusable per-stage buffers.
#[derive(Debug, Default)]
struct Workspace {
    p: Vec<f64>,
    tau: Vec<f64>,
    q: Vec<f64>,
    ux: Vec<f64>,
    k1: Rates,
    k2: Rates,
    stage: Fields,
}

#[derive(Debug, Default, Clone)]
struct Rates {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    mass_flux: f64,
    momentum_flux: f64,
}

#[derive(Debug, Default, Clone)]
struct Fields {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
}

/// Boundary data needed by one right-hand-side evaluation.
struct BoundaryData {
    left_ghost: ThermoState,
    right_ghost: ThermoState,
}

impl BoundaryData {
    fn at<F: FarField + ?Sized>(far: &F, grid: &Grid1D, t: f64) -> Result<Self> {
        let xl = grid.x_min() - 0.5 * grid.dx();
        let xr = grid.x_max() + 0.5 * grid.dx();
        let check = |x: f64| -> Result<ThermoState> {
            let s = far.state_at(x, t).map_err(|_| Error::BoundaryUnavailable { x, t })?;
            if s.validate().is_err() {
                return Err(Error::BoundaryUnavailable { x, t });
            }
            Ok(s)
        };
        Ok(BoundaryData {
            left_ghost: check(xl)?,
            right_ghost: check(xr)?,
        })
    }
}

fn boundary_velocities<F: FarField + ?Sized>(far: &F, grid: &Grid1D, t: f64) -> Result<(f64, f64)> {
    let (xl, xr) = (grid.x_min(), grid.x_max());
    let ul = far.state_at(xl, t).map_err(|_| Error::BoundaryUnavailable { x: xl, t })?.u;
    let ur = far.state_at(xr, t).map_err(|_| Error::BoundaryUnavailable { x: xr, t })?.u;
    if !(ul.is_finite() && ur.is_finite()) {
        return Err(Error::BoundaryUnavailable { x: xl, t });
    }
    Ok((ul, ur))
}

#[allow(clippy::too_many_arguments)]
fn rhs<F: FarField + ?Sized>(
    v: &[f64],
    u: &[f64],
    theta: &[f64],
    t: f64,
    grid: &Grid1D,
    g: &GasParams,
    far: &F,
    ws_p: &mut Vec<f64>,
    ws_tau: &mut Vec<f64>,
    ws_q: &mut Vec<f64>,
    ws_ux: &mut Vec<f64>,
    out: &mut Rates,
) -> Result<()> {
    let n = v.len();
    let dx = grid.dx();
    let bd = BoundaryData::at(far, grid, t)?;
    ws_p.resize(n, 0.0);
    ws_tau.resize(n, 0.0);
    ws_ux.resize(n, 0.0);
    ws_q.resize(n + 1, 0.0);
    out.v.resize(n, 0.0);
    out.u.resize(n + 1, 0.0);
    out.theta.resize(n, 0.0);
    let r = g.r();
    let kt = g.kappa_tilde();
    let beta = g.beta();
    let visc_const = g.alpha() == 0.0;
    let mu0 = g.mu_tilde();
    for i in 0..n {
        let ux = (u[i + 1] - u[i]) / dx;
        let mu = if visc_const { mu0 } else { g.viscosity(theta[i]) };
        ws_ux[i] = ux;
        ws_p[i] = r * theta[i] / v[i];
        ws_tau[i] = mu * ux / v[i];
    }
    // heat flux at edges, with far-field ghost cells outside the domain
    let kappa = |th: f64| kt * th.powf(beta);
    let mut k_prev = kappa(bd.left_ghost.theta);
    let (mut th_prev, mut v_prev) = (bd.left_ghost.theta, bd.left_ghost.v);
    for j in 0..=n {
        let (th_j, v_j) = if j < n { (theta[j], v[j]) } else { (bd.right_ghost.theta, bd.right_ghost.v) };
        let k_j = kappa(th_j);
        ws_q[j] = 0.5 * (k_prev + k_j) * (th_j - th_prev) / (dx * (0.5 * (v_prev + v_j)));
        k_prev = k_j;
        th_prev = th_j;
        v_prev = v_j;
    }
    let forced = far.has_source();
    let c_nu = g.c_nu();
    for i in 0..n {
        let mu = if visc_const { mu0 } else { g.viscosity(theta[i]) };
        let mut dth = -ws_p[i] * ws_ux[i] + (ws_q[i + 1] - ws_q[i]) / dx + mu * ws_ux[i] * ws_ux[i] / v[i];
        let mut dv = ws_ux[i];
        if forced {
            let (sv, _, sth) = far.source(grid.center(i), t);
            dv += sv;
            dth += sth;
        }
        out.v[i] = dv;
        out.theta[i] = dth / c_nu;
    }
    out.u[0] = 0.0;
    out.u[n] = 0.0;
    let mut forcing_sum = 0.0;
    for j in 1..n {
        let mut du = (-(ws_p[j] - ws_p[j - 1]) + (ws_tau[j] - ws_tau[j - 1])) / dx;
        if forced {
            let su = far.source(grid.edge(j), t).1;
            du += su;
            forcing_sum += su;
        }
        out.u[j] = du;
    }
    out.mass_flux = u[n] - u[0];
    if forced {
        let sv_sum: f64 = (0..n).map(|i| far.source(grid.center(i), t).0).sum();
        out.mass_flux += dx * sv_sum;
    }
    out.momentum_flux = -(ws_p[n - 1] - ws_p[0]) + (ws_tau[n - 1] - ws_tau[0]) + dx * forcing_sum;
    Ok(())
}

/// Stateful stepper owning its scratch buffers.
pub struct Stepper<'a, F: FarField + ?Sized> {
    grid: Grid1D,
    gas: GasParams,
    far: &'a F,
    ws: Workspace,
}

impl<'a, F: FarField + ?Sized> Stepper<'a, F> {
    pub fn new(grid: Grid1D, gas: GasParams, far: &'a F) -> Self {
        Stepper {
            grid,
            gas,
            far,
            ws: Workspace::default(),
        }
    }

    /// One Heun step of size `dt`. On failure `s` is left untouched.
    pub fn step(&mut self, s: &mut SimulationState, dt: f64) -> Result<()> {
        let n = s.v.len();
        let (grid, g, far) = (&self.grid, &self.gas, self.far);
        let ws = &mut self.ws;
        let t1 = s.t + dt;
        rhs(&s.v, &s.u, &s.theta, s.t, grid, g, far, &mut ws.p, &mut ws.tau, &mut ws.q, &mut ws.ux, &mut ws.k1)?;
        let (ul, ur) = boundary_velocities(far, grid, t1)?;
        let st = &mut ws.stage;
        st.v.resize(n, 0.0);
        st.theta.resize(n, 0.0);
        st.u.resize(n + 1, 0.0);
        for i in 0..n {
            st.v[i] = s.v[i] + dt * ws.k1.v[i];
            st.theta[i] = s.theta[i] + dt * ws.k1.theta[i];
        }
        for j in 1..n {
            st.u[j] = s.u[j] + dt * ws.k1.u[j];
        }
        st.u[0] = ul;
        st.u[n] = ur;
        check_positive(&st.v, &st.theta, t1)?;
        rhs(&st.v, &st.u, &st.theta, t1, grid, g, far, &mut ws.p, &mut ws.tau, &mut ws.q, &mut ws.ux, &mut ws.k2)?;
        let half = 0.5 * dt;
        // write into the stage buffer first so a rejected step leaves `s` intact
        for i in 0..n {
            st.v[i] = s.v[i] + half * (ws.k1.v[i] + ws.k2.v[i]);
            st.theta[i] = s.theta[i] + half * (ws.k1.theta[i] + ws.k2.theta[i]);
        }
        for j in 1..n {
            st.u[j] = s.u[j] + half * (ws.k1.u[j] + ws.k2.u[j]);
        }
        check_positive(&st.v, &st.theta, t1)?;
        std::mem::swap(&mut s.v, &mut st.v);
        std::mem::swap(&mut s.theta, &mut st.theta);
        std::mem::swap(&mut s.u, &mut st.u);
        s.u[0] = ul;
        s.u[n] = ur;
        s.ledger.mass_flux += half * (ws.k1.mass_flux + ws.k2.mass_flux);
        s.ledger.momentum_flux += half * (ws.k1.momentum_flux + ws.k2.momentum_flux);
        s.t = t1;
        s.step_count += 1;
        Ok(())
    }

    /// Step with one automatic halving retry on positivity loss.
    /// Returns the step size actually taken.
    pub fn step_with_retry(&mut self, s: &mut SimulationState, dt: f64) -> Result<f64> {
        match self.step(s, dt) {
            Ok(()) => Ok(dt),
            Err(Error::PositivityLoss { .. }) => {
                self.step(s, 0.5 * dt)?;
                Ok(0.5 * dt)
            }
            Err(e) => Err(e),
        }
    }
}

fn check_positive(v: &[f64], theta: &[f64], t: f64) -> Result<()> {
    for (i, (&vi, &ti)) in v.iter().zip(theta).enumerate() {
        if !(vi > 0.0 && vi.is_finite()) {
            return Err(Error::PositivityLoss { t, cell: i, field: "v", value: vi });
        }
        if !(ti > 0.0 && ti.is_finite()) {
            return Err(Error::PositivityLoss {
                t,
                cell: i,
                field: "theta",
                value: ti,
            });
        }
    }
    Ok(())
}

/// Single step with a fresh workspace.
pub fn step<F: FarField + ?Sized>(s: &SimulationState, dt: f64, far: &F, grid: &Grid1D, g: &GasParams) -> Result<SimulationState> {
    let mut out = s.clone();
    Stepper::new(*grid, *g, far).step(&mut out, dt)?;
    Ok(out)
}

/// Observer invoked by [`run`].
pub trait Recorder {
    fn record(&mut self, s: &SimulationState, grid: &Grid1D) -> Result<()>;

    fn snapshot(&mut self, _s: &SimulationState, _grid: &Grid1D) -> Result<()> {
        Ok(())
    }
}

/// Recorder that ignores everything.
pub struct NullRecorder;

impl Recorder for NullRecorder {
    fn record(&mut self, _s: &SimulationState, _grid: &Grid1D) -> Result<()> {
        Ok(())
    }
}

/// Integrates to `cfg.t_end`, landing exactly on every record and snapshot time.
pub fn run<F: FarField + ?Sized, R: Recorder + ?Sized>(
    mut s: SimulationState,
    grid: &Grid1D,
    cfg: &SolverConfig,
    far: &F,
    g: &GasParams,
    recorder: &mut R,
) -> Result<SimulationState> {
    cfg.validate()?;
    if s.v.len() != grid.n_cells() || s.u.len() != grid.n_cells() + 1 || s.theta.len() != grid.n_cells() {
        return Err(Error::InvalidSolverConfig("state does not match grid".into()));
    }
    let mut snaps: Vec<f64> = cfg.snapshot_times.clone();
    snaps.sort_by(|a, b| a.total_cmp(b));
    snaps.dedup();
    let mut next_snap = 0;
    let take_snapshots = |s: &SimulationState, next: &mut usize, rec: &mut R| -> Result<()> {
        while *next < snaps.len() && snaps[*next] <= s.t {
            rec.snapshot(s, grid)?;
            *next += 1;
        }
        Ok(())
    };
    recorder.record(&s, grid)?;
    take_snapshots(&s, &mut next_snap, recorder)?;
    let mut k_record = 1usize;
    let mut stepper = Stepper::new(*grid, *g, far);
    let start_steps = s.step_count;
    while s.t < cfg.t_end {
        if s.step_count - start_steps >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        let next_record = (k_record as f64 * cfg.record_interval).min(cfg.t_end);
        let mut target = next_record;
        if next_snap < snaps.len() {
            target = target.min(snaps[next_snap]);
        }
        let dt_max = stable_dt(&s, grid, cfg, g);
        let remaining = target - s.t;
        // land exactly on the target; split the last two steps evenly
        let dt = if remaining <= dt_max {
            remaining
        } else if remaining < 2.0 * dt_max {
            0.5 * remaining
        } else {
            dt_max
        };
        let taken = stepper.step_with_retry(&mut s, dt)?;
        if taken == remaining {
            s.t = target;
        }
        if s.t >= next_record {
            recorder.record(&s, grid)?;
            while k_record as f64 * cfg.record_interval <= s.t {
                k_record += 1;
            }
        }
        take_snapshots(&s, &mut next_snap, recorder)?;
    }
    Ok(s)
}
