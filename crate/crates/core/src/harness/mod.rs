//! Scenario runs, manifests and verification drivers.

pub mod config;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub use config::{
    load_config, DiagnosticsOptions, EndStates, ManufacturedSpec, PerturbationKind, PerturbationShape, PerturbationSpec,
    RunConfig, Scenario, CONFIG_SCHEMA,
};

use crate::diagnostics::{
    check_averages, decay_report, empirical_c0, CellAverageReport, CellAverages, DecayReport, DiagnosticsRecord,
    TrajectoryRecorder,
};
use crate::error::{Error, Result};
use crate::gas::{GasParams, ThermoState};
use crate::numerics::linear_fit;
use crate::profiles::CompositeAnsatz;
use crate::riemann::{solve_wave_pattern, WaveDecomposition};
use crate::solver::{initialize, run, FarField, Grid1D, Manufactured, NullRecorder, SimulationState, Uniform};

/// Environment variable naming the default output root of the CLI.
pub const OUT_ROOT_ENV: &str = "VCWAVE_OUT_ROOT";

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PROFILE_FILE: &str = "profile.txt";
pub const CONFIG_ECHO_FILE: &str = "config.toml";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// Riemann tolerance used when building scenario ansatzes.
const RIEMANN_TOL: f64 = 1e-10;

/// Far field of a scenario.
#[derive(Debug, Clone)]
pub enum Background {
    Ansatz(Box<CompositeAnsatz>),
    Uniform(Uniform),
    Manufactured(Manufactured),
}

impl FarField for Background {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState> {
        match self {
            Background::Ansatz(a) => a.state_at(x, t),
            Background::Uniform(u) => u.state_at(x, t),
            Background::Manufactured(m) => m.state_at(x, t),
        }
    }
    fn source(&self, x: f64, t: f64) -> (f64, f64, f64) {
        match self {
            Background::Manufactured(m) => m.source(x, t),
            _ => (0.0, 0.0, 0.0),
        }
    }
    fn has_source(&self) -> bool {
        matches!(self, Background::Manufactured(_))
    }
}

impl Background {
    pub fn ansatz(&self) -> Option<&CompositeAnsatz> {
        match self {
            Background::Ansatz(a) => Some(a),
            _ => None,
        }
    }

    /// Window exponent: configured, else `c1 / 4` of the contact profile, else 1/4.
    fn window_alpha(&self, opts: &DiagnosticsOptions) -> f64 {
        if let Some(a) = opts.window_alpha {
            return a;
        }
        match self {
            Background::Ansatz(a) if !a.contact.is_constant() => a.contact.decay_c1 / 4.0,
            _ => 0.25,
        }
    }

    /// Lower bound of the ansatz temperature over all of space-time.
    fn theta_floor(&self) -> f64 {
        match self {
            Background::Ansatz(a) => {
                let d = &a.decomposition;
                [d.left, d.left_mid, d.right_mid, d.right]
                    .iter()
                    .map(|s| s.theta)
                    .fold(f64::INFINITY, f64::min)
            }
            Background::Uniform(u) => u.0.theta,
            Background::Manufactured(m) => 1.0 - m.c.abs(),
        }
    }
}

/// Builds the far field of a configuration.
pub fn build_background(cfg: &RunConfig) -> Result<(Background, Option<WaveDecomposition>)> {
    let g = cfg.gas_params()?;
    let EndStates { left, right } = cfg.end_states;
    Ok(match cfg.scenario {
        Scenario::ContactOnly | Scenario::Composite => {
            let d = solve_wave_pattern(&left, &right, &g, RIEMANN_TOL)?;
            let a = CompositeAnsatz::new(&d, &g, &cfg.profile)?;
            (Background::Ansatz(Box::new(a)), Some(d))
        }
        Scenario::Quiescent => (Background::Uniform(Uniform(left)), None),
        Scenario::Manufactured => {
            let m = cfg.manufactured.ok_or_else(|| Error::ValidationError("missing manufactured table".into()))?;
            (
                Background::Manufactured(Manufactured::new(m.amplitude_v, m.amplitude_theta, m.wavenumber, g)),
                None,
            )
        }
    })
}

/// Tabulated perturbation read from `x,dv,du,dtheta` rows, linearly
/// interpolated and zero outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTable {
    x: Vec<f64>,
    d: Vec<[f64; 3]>,
}

impl PerturbationTable {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut x = Vec::new();
        let mut d = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::ParseError { line: k + 1, message: format!("{}: {e}", path.display()) })?;
            if vals.len() != 4 {
                return Err(Error::ParseError {
                    line: k + 1,
                    message: format!("{}: expected x,dv,du,dtheta", path.display()),
                });
            }
            if let Some(&last) = x.last() {
                if vals[0] <= last {
                    return Err(Error::ParseError {
                        line: k + 1,
                        message: format!("{}: x must increase", path.display()),
                    });
                }
            }
            x.push(vals[0]);
            d.push([vals[1], vals[2], vals[3]]);
        }
        if x.len() < 2 {
            return Err(Error::ValidationError(format!("{} holds fewer than two rows", path.display())));
        }
        Ok(PerturbationTable { x, d })
    }

    pub fn eval(&self, x: f64) -> [f64; 3] {
        let n = self.x.len();
        if x < self.x[0] || x > self.x[n - 1] {
            return [0.0; 3];
        }
        let j = self.x.partition_point(|&xi| xi <= x).clamp(1, n - 1);
        let s = (x - self.x[j - 1]) / (self.x[j] - self.x[j - 1]);
        let (a, b) = (self.d[j - 1], self.d[j]);
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), a[2] + s * (b[2] - a[2])]
    }
}

pub type PerturbationFn<'a> = Box<dyn Fn(f64) -> (f64, f64, f64) + 'a>;

/// Initial perturbation `(phi, psi, zeta)` of a configuration.
pub fn perturbation_fn<'a>(spec: &PerturbationSpec, background: &'a Background) -> Result<PerturbationFn<'a>> {
    let bump = {
        let (a, w, c) = (spec.amplitude, spec.width, spec.center);
        move |x: f64| a * (-((x - c) / w) * ((x - c) / w)).exp()
    };
    Ok(match (spec.kind, spec.shape) {
        (PerturbationKind::None, _) => Box::new(|_| (0.0, 0.0, 0.0)),
        (PerturbationKind::Gaussian, PerturbationShape::Uniform) => Box::new(move |x| {
            let b = bump(x);
            (b, b, b)
        }),
        (PerturbationKind::Gaussian, PerturbationShape::Isobaric) => Box::new(move |x| {
            let b = bump(x);
            match background.state_at(x, 0.0) {
                Ok(s) => (b * s.v / s.theta, 0.0, b),
                Err(_) => (f64::NAN, 0.0, f64::NAN),
            }
        }),
        (PerturbationKind::File, _) => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| Error::ValidationError("perturbation.path missing".into()))?;
            let table = PerturbationTable::read(path)?;
            Box::new(move |x| {
                let [a, b, c] = table.eval(x);
                (a, b, c)
            })
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub module: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            module: e.module().to_string(),
            message: e.to_string(),
        }
    }
}

/// Output files, relative to the run directory.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FileInventory {
    pub config: Option<String>,
    pub diagnostics: Option<String>,
    pub snapshots: Vec<String>,
    pub profile_table: Option<String>,
}

impl FileInventory {
    pub fn paths(&self) -> Vec<&str> {
        let mut v: Vec<&str> = Vec::new();
        v.extend(self.config.as_deref());
        v.extend(self.diagnostics.as_deref());
        v.extend(self.snapshots.iter().map(String::as_str));
        v.extend(self.profile_table.as_deref());
        v
    }
}

/// Scenario-specific outcome checks.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunVerdicts {
    pub decay: Option<DecayReport>,
    pub cell_averages: Option<CellAverageReport>,
    /// Largest sup-norm of the perturbation over a quiescent run.
    pub quiescent_sup: Option<f64>,
    /// L2 distance to the manufactured solution at `t_end`.
    pub manufactured_error: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub status: RunStatus,
    pub seed_label: String,
    pub scenario: Scenario,
    pub version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
    pub config: RunConfig,
    pub decomposition: Option<WaveDecomposition>,
    pub steps: usize,
    pub files: FileInventory,
    pub final_record: Option<DiagnosticsRecord>,
    pub verdicts: Option<RunVerdicts>,
    pub error: Option<ErrorRecord>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::ValidationError(format!("cannot serialize manifest: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::ParseError {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Everything a run produced, including the in-memory trajectory.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub records: Vec<DiagnosticsRecord>,
    pub final_state: SimulationState,
    pub background: Background,
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn rel_name(dir: &Path, p: &Path) -> String {
    p.strip_prefix(dir).unwrap_or(p).to_string_lossy().into_owned()
}

/// Verdicts of one trajectory.
pub fn evaluate_run(
    cfg: &RunConfig,
    background: &Background,
    records: &[DiagnosticsRecord],
    final_state: &SimulationState,
    grid: &Grid1D,
    g: &GasParams,
) -> Result<RunVerdicts> {
    let mut v = RunVerdicts::default();
    match cfg.scenario {
        Scenario::ContactOnly | Scenario::Composite => {
            let report = decay_report(records, &cfg.thresholds)?;
            let mut pass = report.pass;
            if cfg.diagnostics.cell_averages {
                let c0 = empirical_c0(records, background.theta_floor(), g);
                let merged = merge_averages(records)?;
                let cells = check_averages(merged, c0);
                pass &= cells.pass;
                v.cell_averages = Some(cells);
            }
            v.decay = Some(report);
            v.pass = pass;
        }
        Scenario::Quiescent => {
            let sup = records.iter().map(|r| r.sup_all()).fold(0.0f64, f64::max);
            v.quiescent_sup = Some(sup);
            v.pass = sup < cfg.diagnostics.quiescent_tolerance;
        }
        Scenario::Manufactured => {
            let Background::Manufactured(m) = background else {
                return Err(Error::ValidationError("manufactured background expected".into()));
            };
            let e = manufactured_error(final_state, m, grid).l2();
            v.manufactured_error = Some(e);
            let bound = cfg.manufactured.map(|m| m.max_error).unwrap_or(f64::INFINITY);
            v.pass = e.is_finite() && e < bound;
        }
    }
    Ok(v)
}

fn merge_averages(records: &[DiagnosticsRecord]) -> Result<CellAverages> {
    let mut it = records.iter().filter_map(|r| r.cell_averages);
    let first = it
        .next()
        .ok_or_else(|| Error::InsufficientData("no cell averages were recorded".into()))?;
    Ok(it.fold(first, |a, b| CellAverages {
        n_intervals: a.n_intervals.min(b.n_intervals),
        min_v_ratio: a.min_v_ratio.min(b.min_v_ratio),
        max_v_ratio: a.max_v_ratio.max(b.max_v_ratio),
        min_theta_ratio: a.min_theta_ratio.min(b.min_theta_ratio),
        max_theta_ratio: a.max_theta_ratio.max(b.max_theta_ratio),
    }))
}

/// Runs a scenario, writing diagnostics, snapshots, the profile table and
/// `manifest.json` into `out_dir`. On error a failure manifest carrying the
/// originating module is written before the error is returned.
pub fn run_scenario(cfg: &RunConfig, out_dir: &Path) -> Result<RunManifest> {
    run_scenario_detailed(cfg, Some(out_dir)).map(|o| o.manifest)
}

/// As [`run_scenario`]; with `out_dir = None` nothing is written.
pub fn run_scenario_detailed(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    let started_unix = unix_now();
    let clock = Instant::now();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut files = FileInventory::default();
    let mut decomposition = None;
    let result = execute(cfg, out_dir, &mut files, &mut decomposition);
    let finished_unix = unix_now();
    let make = |status, steps, final_record, verdicts, error| RunManifest {
        status,
        seed_label: cfg.seed_label.clone(),
        scenario: cfg.scenario,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix,
        finished_unix,
        wall_seconds: clock.elapsed().as_secs_f64(),
        config: cfg.clone(),
        decomposition,
        steps,
        files: files.clone(),
        final_record,
        verdicts,
        error,
    };
    match result {
        Ok((records, final_state, background, verdicts)) => {
            let status = if verdicts.pass { RunStatus::Pass } else { RunStatus::Fail };
            let manifest = make(status, final_state.step_count, records.last().copied(), Some(verdicts), None);
            if let Some(dir) = out_dir {
                manifest.write(&dir.join(MANIFEST_FILE))?;
            }
            Ok(RunOutcome {
                manifest,
                records,
                final_state,
                background,
            })
        }
        Err(e) => {
            if let Some(dir) = out_dir {
                let manifest = make(RunStatus::Error, 0, None, None, Some(ErrorRecord::from(&e)));
                // the original error matters more than a failed manifest write
                let _ = manifest.write(&dir.join(MANIFEST_FILE));
            }
            Err(e)
        }
    }
}

type Executed = (Vec<DiagnosticsRecord>, SimulationState, Background, RunVerdicts);

fn execute(
    cfg: &RunConfig,
    out_dir: Option<&Path>,
    files: &mut FileInventory,
    decomposition: &mut Option<WaveDecomposition>,
) -> Result<Executed> {
    cfg.validate()?;
    let g = cfg.gas_params()?;
    let grid = cfg.grid()?;
    if let Some(dir) = out_dir {
        let p = dir.join(CONFIG_ECHO_FILE);
        cfg.save(&p)?;
        files.config = Some(rel_name(dir, &p));
    }
    let (background, d) = build_background(cfg)?;
    *decomposition = d;
    if let (Some(dir), Some(a)) = (out_dir, background.ansatz()) {
        let p = dir.join(PROFILE_FILE);
        a.contact.write_table(&p)?;
        files.profile_table = Some(rel_name(dir, &p));
    }
    let pert = perturbation_fn(&cfg.perturbation, &background)?;
    let s0 = initialize(&background, pert, &grid, &g)?;
    let alpha = background.window_alpha(&cfg.diagnostics);
    let cell_averages = cfg.diagnostics.cell_averages && matches!(background, Background::Ansatz(_));
    let mut rec = TrajectoryRecorder::new(&background, g, alpha).with_cell_averages(cell_averages);
    if let Some(dir) = out_dir {
        rec = rec.with_csv(&dir.join(DIAGNOSTICS_FILE))?;
        if !cfg.solver.snapshot_times.is_empty() {
            let snaps = dir.join(SNAPSHOT_DIR);
            std::fs::create_dir_all(&snaps).map_err(|e| Error::io(&snaps, e))?;
            rec = rec.with_snapshots(&snaps);
        }
    }
    let out = run(s0, &grid, &cfg.solver, &background, &g, &mut rec);
    rec.finish()?;
    if let Some(dir) = out_dir {
        files.diagnostics = Some(DIAGNOSTICS_FILE.to_string());
        files.snapshots = rec.snapshots.iter().map(|p| rel_name(dir, p)).collect();
    }
    let final_state = out?;
    let records = std::mem::take(&mut rec.records);
    drop(rec);
    let verdicts = evaluate_run(cfg, &background, &records, &final_state, &grid, &g)?;
    Ok((records, final_state, background, verdicts))
}

/// Discrete L2 errors per field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldErrors {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl FieldErrors {
    pub fn l2(&self) -> f64 {
        (self.v * self.v + self.u * self.u + self.theta * self.theta).sqrt()
    }
    fn max(&self) -> f64 {
        self.v.max(self.u).max(self.theta)
    }
}

fn manufactured_error(s: &SimulationState, m: &Manufactured, grid: &Grid1D) -> FieldErrors {
    let dx = grid.dx();
    let sq = |it: &mut dyn Iterator<Item = f64>| (it.map(|e| e * e).sum::<f64>() * dx).sqrt();
    FieldErrors {
        v: sq(&mut (0..grid.n_cells()).map(|i| s.v[i] - m.exact(grid.center(i), s.t).v)),
        u: sq(&mut (0..=grid.n_cells()).map(|j| s.u[j] - m.exact(grid.edge(j), s.t).u)),
        theta: sq(&mut (0..grid.n_cells()).map(|i| s.theta[i] - m.exact(grid.center(i), s.t).theta)),
    }
}

/// Coarse-minus-restricted-fine differences (fine cells averaged pairwise,
/// edges taken at the coinciding points).
fn successive_error(coarse: &SimulationState, fine: &SimulationState, grid: &Grid1D) -> FieldErrors {
    let dx = grid.dx();
    let n = grid.n_cells();
    let sq = |it: &mut dyn Iterator<Item = f64>| (it.map(|e| e * e).sum::<f64>() * dx).sqrt();
    FieldErrors {
        v: sq(&mut (0..n).map(|i| coarse.v[i] - 0.5 * (fine.v[2 * i] + fine.v[2 * i + 1]))),
        u: sq(&mut (0..=n).map(|j| coarse.u[j] - fine.u[2 * j])),
        theta: sq(&mut (0..n).map(|i| coarse.theta[i] - 0.5 * (fine.theta[2 * i] + fine.theta[2 * i + 1]))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub n_cells: usize,
    pub dx: f64,
    pub errors: FieldErrors,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// "exact" (manufactured or quiescent) or "successive" differences.
    pub reference: String,
    pub levels: Vec<LevelResult>,
    /// `log2(e_k / e_{k+1})` per field, between consecutive levels.
    pub orders: Vec<FieldErrors>,
    /// Least-squares order over all levels, per field.
    pub fitted_order: Option<FieldErrors>,
    /// All errors at round-off level; orders are then meaningless.
    pub exact: bool,
}

impl ConvergenceReport {
    pub fn orders_within(&self, lo: f64, hi: f64) -> bool {
        self.exact
            || (!self.orders.is_empty()
                && self
                    .orders
                    .iter()
                    .all(|o| [o.v, o.u, o.theta].iter().all(|&x| x >= lo && x <= hi)))
    }
}

const EXACT_LEVEL: f64 = 1e-12;

/// Runs at `n, 2n, 4n, ...` cells and reports observed orders per field.
pub fn convergence_study(cfg: &RunConfig, levels: usize) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::ValidationError(format!("convergence study needs at least 3 levels, got {levels}")));
    }
    cfg.validate()?;
    let g = cfg.gas_params()?;
    let (background, _) = build_background(cfg)?;
    let exact_ref = matches!(cfg.scenario, Scenario::Manufactured | Scenario::Quiescent);
    let runs = if exact_ref { levels } else { levels + 1 };
    let mut states = Vec::with_capacity(runs);
    let mut grids = Vec::with_capacity(runs);
    for k in 0..runs {
        let grid = cfg.grid()?.refined(1 << k)?;
        let pert = perturbation_fn(&cfg.perturbation, &background)?;
        let s0 = initialize(&background, pert, &grid, &g)?;
        let out = run(s0, &grid, &cfg.solver, &background, &g, &mut NullRecorder)?;
        states.push(out);
        grids.push(grid);
    }
    let mut results = Vec::with_capacity(levels);
    for k in 0..levels {
        let errors = match &background {
            Background::Manufactured(m) => manufactured_error(&states[k], m, &grids[k]),
            Background::Uniform(u) => {
                let s = &states[k];
                let dx = grids[k].dx();
                let sq = |a: &[f64], c: f64| (a.iter().map(|x| (x - c) * (x - c)).sum::<f64>() * dx).sqrt();
                FieldErrors {
                    v: sq(&s.v, u.0.v),
                    u: sq(&s.u, u.0.u),
                    theta: sq(&s.theta, u.0.theta),
                }
            }
            Background::Ansatz(_) => successive_error(&states[k], &states[k + 1], &grids[k]),
        };
        results.push(LevelResult {
            n_cells: grids[k].n_cells(),
            dx: grids[k].dx(),
            errors,
        });
    }
    let exact = results.iter().all(|l| l.errors.max() < EXACT_LEVEL);
    let order = |a: f64, b: f64| (a / b).log2();
    let orders = results
        .windows(2)
        .map(|w| FieldErrors {
            v: order(w[0].errors.v, w[1].errors.v),
            u: order(w[0].errors.u, w[1].errors.u),
            theta: order(w[0].errors.theta, w[1].errors.theta),
        })
        .collect();
    let fitted_order = if exact {
        None
    } else {
        let lx: Vec<f64> = results.iter().map(|l| l.dx.ln()).collect();
        let fit = |f: fn(&FieldErrors) -> f64| {
            let ly: Vec<f64> = results.iter().map(|l| f(&l.errors).ln()).collect();
            linear_fit(&lx, &ly).0
        };
        Some(FieldErrors {
            v: fit(|e| e.v),
            u: fit(|e| e.u),
            theta: fit(|e| e.theta),
        })
    };
    Ok(ConvergenceReport {
        reference: if exact_ref { "exact" } else { "successive" }.to_string(),
        levels: results,
        orders,
        fitted_order,
        exact,
    })
}

/// Relative change of one `t_end` diagnostic between the base and doubled domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticChange {
    pub name: String,
    pub base: f64,
    pub doubled: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainCheck {
    pub changes: Vec<DiagnosticChange>,
    pub max_relative: f64,
    pub worst: String,
    /// Conservation drifts are round-off residuals; compared in absolute terms.
    pub max_drift: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const DOMAIN_CHECK_TOL: f64 = 1e-4;
/// Drifts above this in either run indicate a conservation defect.
const DRIFT_TOL: f64 = 1e-10;

/// Compares two final records column by column.
pub fn compare_records(base: &DiagnosticsRecord, doubled: &DiagnosticsRecord, tolerance: f64) -> DomainCheck {
    type Column = (&'static str, fn(&DiagnosticsRecord) -> f64);
    let cols: [Column; 12] = [
        ("E", |r| r.e),
        ("D", |r| r.d),
        ("W", |r| r.w),
        ("sup_phi", |r| r.sup_phi),
        ("sup_psi", |r| r.sup_psi),
        ("sup_zeta", |r| r.sup_zeta),
        ("h1", |r| r.h1),
        ("min_v", |r| r.min_v),
        ("max_v", |r| r.max_v),
        ("min_theta", |r| r.min_theta),
        ("max_theta", |r| r.max_theta),
        ("t", |r| r.t),
    ];
    let changes: Vec<DiagnosticChange> = cols
        .iter()
        .map(|(name, f)| {
            let (a, b) = (f(base), f(doubled));
            let scale = a.abs().max(b.abs());
            let relative = if scale == 0.0 { 0.0 } else { (a - b).abs() / scale };
            DiagnosticChange {
                name: name.to_string(),
                base: a,
                doubled: b,
                relative,
            }
        })
        .collect();
    let (worst, max_relative) = changes
        .iter()
        .map(|c| (c.name.clone(), c.relative))
        .fold((String::new(), 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
    let max_drift = [base.mass_drift, base.momentum_drift, doubled.mass_drift, doubled.momentum_drift]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    DomainCheck {
        pass: max_relative < tolerance && max_drift < DRIFT_TOL,
        changes,
        max_relative,
        worst,
        max_drift,
        tolerance,
    }
}

/// Runs `cfg` and its doubled-domain twin and compares the `t_end` diagnostics.
pub fn domain_doubling_check(cfg: &RunConfig) -> Result<(DomainCheck, RunOutcome, RunOutcome)> {
    let base = run_scenario_detailed(cfg, None)?;
    let doubled = run_scenario_detailed(&cfg.with_doubled_domain(), None)?;
    let (Some(a), Some(b)) = (base.records.last(), doubled.records.last()) else {
        return Err(Error::InsufficientData("runs produced no records".into()));
    };
    Ok((compare_records(a, b, DOMAIN_CHECK_TOL), base, doubled))
}

/// Default output root: `$VCWAVE_OUT_ROOT`, else `./vcwave-out`.
pub fn default_out_root() -> PathBuf {
    std::env::var_os(OUT_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("vcwave-out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiescent() -> RunConfig {
        RunConfig::from_toml_str(
            r#"
seed_label = "q"
scenario = "quiescent"
gas.r = 1.0
gas.gamma = 1.4
gas.mu_tilde = 1.0
gas.kappa_tilde = 1.0
gas.beta = 1.0
end_states.left = { v = 1.0, u = 0.1, theta = 1.0 }
end_states.right = { v = 1.0, u = 0.1, theta = 1.0 }
grid.x_min = -5.0
grid.x_max = 5.0
grid.n_cells = 40
solver.t_end = 1.0
solver.snapshot_times = [0.5]
"#,
        )
        .unwrap()
    }

    #[test]
    fn quiescent_run_writes_inventory() {
        let dir = tempfile::tempdir().unwrap();
        let m = run_scenario(&quiescent(), dir.path()).unwrap();
        assert_eq!(m.status, RunStatus::Pass);
        for f in m.files.paths() {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert_eq!(m.files.snapshots.len(), 1);
        let back = RunManifest::read(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(back.config, m.config);
    }

    #[test]
    fn failure_manifest_names_module() {
        let mut c = quiescent();
        c.scenario = Scenario::Composite;
        c.end_states.right = ThermoState { v: 0.5, u: 0.1, theta: 1.0 };
        let dir = tempfile::tempdir().unwrap();
        let e = run_scenario(&c, dir.path()).unwrap_err();
        let m = RunManifest::read(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(m.status, RunStatus::Error);
        let rec = m.error.unwrap();
        assert_eq!(rec.module, e.module());
        assert_eq!(rec.message, e.to_string());
    }

    #[test]
    fn table_interpolates_and_vanishes_outside() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        std::fs::write(&p, "x,dv,du,dtheta\n-1,0,0,0\n0,0.2,0.1,-0.1\n1,0,0,0\n").unwrap();
        let t = PerturbationTable::read(&p).unwrap();
        assert_eq!(t.eval(-0.5), [0.1, 0.05, -0.05]);
        assert_eq!(t.eval(2.0), [0.0; 3]);
        std::fs::write(&p, "0,1,1,1\n0,1,1,1\n").unwrap();
        assert!(matches!(PerturbationTable::read(&p), Err(Error::ParseError { line: 2, .. })));
    }

    #[test]
    fn quiescent_convergence_is_exact() {
        let r = convergence_study(&quiescent(), 3).unwrap();
        assert!(r.exact && r.orders_within(1.8, 2.2));
        assert_eq!(r.levels.iter().map(|l| l.n_cells).collect::<Vec<_>>(), vec![40, 80, 160]);
        assert!(convergence_study(&quiescent(), 2).is_err());
    }
}
