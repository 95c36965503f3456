//! Perturbation fields, energy functionals and decay checks evaluated along
//! solver trajectories.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{phi_entropy, GasParams};
use crate::numerics::{bisect, gradient, log_log_slope, trapezoid, trapezoid_xy};
use crate::solver::{FarField, Grid1D, Recorder, SimulationState};

/// Exact CSV header of the diagnostics stream.
pub const CSV_HEADER: &str = "t,E,D,W,sup_phi,sup_psi,sup_zeta,h1,min_v,max_v,min_theta,max_theta,mass_drift,momentum_drift";
/// Exact header of snapshot files.
pub const SNAPSHOT_HEADER: &str = "x,v,u,theta,V,U,Theta,phi,psi,zeta";

/// Ansatz sampled on the grid at one time: `V`, `Theta` at centers, `U` at
/// edges and averaged to centers.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub u_edges: Vec<f64>,
    pub theta: Vec<f64>,
}

impl AnsatzSample {
    pub fn at<F: FarField + ?Sized>(far: &F, grid: &Grid1D, t: f64) -> Result<Self> {
        let n = grid.n_cells();
        let x = grid.cell_centers();
        let mut v = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for &xi in &x {
            let s = far.state_at(xi, t)?;
            v.push(s.v);
            theta.push(s.theta);
        }
        let u_edges = (0..=n).map(|j| far.state_at(grid.edge(j), t).map(|s| s.u)).collect::<Result<Vec<_>>>()?;
        let u = u_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Ok(AnsatzSample { t, x, v, u, u_edges, theta })
    }
}

/// `(phi, psi, zeta) = (v - V, u - U, theta - Theta)` at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationField {
    pub t: f64,
    pub x: Vec<f64>,
    pub dx: f64,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub zeta: Vec<f64>,
}

/// `psi` is formed at edges and then averaged to centers.
pub fn perturbation(s: &SimulationState, a: &AnsatzSample, grid: &Grid1D) -> PerturbationField {
    let phi = s.v.iter().zip(&a.v).map(|(v, big)| v - big).collect();
    let zeta = s.theta.iter().zip(&a.theta).map(|(t, big)| t - big).collect();
    let psi_e: Vec<f64> = s.u.iter().zip(&a.u_edges).map(|(u, big)| u - big).collect();
    let psi = psi_e.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    PerturbationField {
        t: s.t,
        x: a.x.clone(),
        dx: grid.dx(),
        phi,
        psi,
        zeta,
    }
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

impl PerturbationField {
    pub fn sup_phi(&self) -> f64 {
        sup(&self.phi)
    }
    pub fn sup_psi(&self) -> f64 {
        sup(&self.psi)
    }
    pub fn sup_zeta(&self) -> f64 {
        sup(&self.zeta)
    }
    pub fn sup_all(&self) -> f64 {
        self.sup_phi().max(self.sup_psi()).max(self.sup_zeta())
    }
}

/// `int psi^2/2 + R Theta Phi(v/V) + c_nu Theta Phi(theta/Theta) dx`.
pub fn basic_energy(p: &PerturbationField, s: &SimulationState, a: &AnsatzSample, g: &GasParams) -> f64 {
    let integrand: Vec<f64> = (0..s.v.len())
        .map(|i| {
            0.5 * p.psi[i] * p.psi[i]
                + g.r() * a.theta[i] * phi_entropy(s.v[i] / a.v[i])
                + g.c_nu() * a.theta[i] * phi_entropy(s.theta[i] / a.theta[i])
        })
        .collect();
    trapezoid(&integrand, p.dx)
}

/// `int psi_x^2 / (theta v) + theta^beta zeta_x^2 / (theta^2 v) dx`.
pub fn dissipation(p: &PerturbationField, s: &SimulationState, g: &GasParams) -> f64 {
    let px = gradient(&p.psi, p.dx);
    let zx = gradient(&p.zeta, p.dx);
    let integrand: Vec<f64> = (0..s.v.len())
        .map(|i| {
            let (v, th) = (s.v[i], s.theta[i]);
            px[i] * px[i] / (th * v) + th.powf(g.beta()) * zx[i] * zx[i] / (th * th * v)
        })
        .collect();
    trapezoid(&integrand, p.dx)
}

/// Window `w(x, t) = (1+t)^{-1/2} exp(-alpha x^2 / (1+t))`.
#[inline]
pub fn window(x: f64, t: f64, alpha: f64) -> f64 {
    (1.0 + t).powf(-0.5) * (-alpha * x * x / (1.0 + t)).exp()
}

/// `int_R w^2 dx = sqrt(pi / (2 alpha)) / sqrt(1 + t)`.
pub fn window_sq_integral(t: f64, alpha: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * alpha)).sqrt() / (1.0 + t).sqrt()
}

/// `int (phi^2 + psi^2 + zeta^2) w^2 dx`.
pub fn window_norm(p: &PerturbationField, t: f64, alpha: f64) -> f64 {
    let integrand: Vec<f64> = (0..p.x.len())
        .map(|i| {
            let w = window(p.x[i], t, alpha);
            (p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i]) * w * w
        })
        .collect();
    trapezoid(&integrand, p.dx)
}

/// `int phi_x^2 + psi_x^2 + zeta_x^2 dx`.
pub fn gradient_sq(p: &PerturbationField) -> f64 {
    let sq = |a: &[f64]| {
        let d = gradient(a, p.dx);
        trapezoid(&d.iter().map(|x| x * x).collect::<Vec<_>>(), p.dx)
    };
    sq(&p.phi) + sq(&p.psi) + sq(&p.zeta)
}

/// `int phi^2 + psi^2 + zeta^2 dx`.
pub fn l2_sq(p: &PerturbationField) -> f64 {
    let sq = |a: &[f64]| trapezoid(&a.iter().map(|x| x * x).collect::<Vec<_>>(), p.dx);
    sq(&p.phi) + sq(&p.psi) + sq(&p.zeta)
}

pub fn h1_norm(p: &PerturbationField) -> f64 {
    (l2_sq(p) + gradient_sq(p)).sqrt()
}

/// Roots `alpha_1 < 1 < alpha_2` of `y - ln y - 1 = c0`.
pub fn alpha_roots(c0: f64) -> (f64, f64) {
    if !(c0 > 0.0) {
        return (1.0, 1.0);
    }
    // Phi decreases on (0, 1) and increases on (1, inf).
    let mut lo = 0.5;
    while phi_entropy(lo) < c0 {
        lo *= 0.5;
    }
    let a1 = bisect(|y| c0 - phi_entropy(y), lo, 1.0, 1e-15, 400);
    let mut hi = 2.0;
    while phi_entropy(hi) < c0 {
        hi *= 2.0;
    }
    let a2 = bisect(|y| phi_entropy(y) - c0, 1.0, hi, 1e-15 * hi, 400);
    (a1, a2)
}

/// Extremes of the unit-interval averages of `v/V` and `theta/Theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellAverages {
    pub n_intervals: usize,
    pub min_v_ratio: f64,
    pub max_v_ratio: f64,
    pub min_theta_ratio: f64,
    pub max_theta_ratio: f64,
}

impl CellAverages {
    pub fn min(&self) -> f64 {
        self.min_v_ratio.min(self.min_theta_ratio)
    }
    pub fn max(&self) -> f64 {
        self.max_v_ratio.max(self.max_theta_ratio)
    }
}

/// Averages over every integer interval `[k, k+1]` inside the domain, with
/// cells weighted by their overlap with the interval.
pub fn cell_averages(s: &SimulationState, a: &AnsatzSample, grid: &Grid1D) -> Result<CellAverages> {
    let k0 = grid.x_min().ceil() as i64;
    let k1 = grid.x_max().floor() as i64 - 1;
    let count = if k1 >= k0 { (k1 - k0 + 1) as usize } else { 0 };
    if count < 3 {
        return Err(Error::DomainTooNarrow(count));
    }
    let dx = grid.dx();
    let mut out = CellAverages {
        n_intervals: count,
        min_v_ratio: f64::INFINITY,
        max_v_ratio: f64::NEG_INFINITY,
        min_theta_ratio: f64::INFINITY,
        max_theta_ratio: f64::NEG_INFINITY,
    };
    for k in k0..=k1 {
        let (lo, hi) = (k as f64, k as f64 + 1.0);
        let first = (((lo - grid.x_min()) / dx).floor().max(0.0)) as usize;
        let (mut sv, mut st, mut w) = (0.0, 0.0, 0.0);
        for i in first..grid.n_cells() {
            let (cl, cr) = (grid.edge(i), grid.edge(i + 1));
            if cl >= hi {
                break;
            }
            let overlap = cr.min(hi) - cl.max(lo);
            if overlap > 0.0 {
                sv += overlap * s.v[i] / a.v[i];
                st += overlap * s.theta[i] / a.theta[i];
                w += overlap;
            }
        }
        let (av, at) = (sv / w, st / w);
        out.min_v_ratio = out.min_v_ratio.min(av);
        out.max_v_ratio = out.max_v_ratio.max(av);
        out.min_theta_ratio = out.min_theta_ratio.min(at);
        out.max_theta_ratio = out.max_theta_ratio.max(at);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellAverageReport {
    pub c0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub averages: CellAverages,
    pub pass: bool,
}

/// Checks `alpha_1 <= avg <= alpha_2` for every unit interval.
pub fn cell_average_bounds(s: &SimulationState, a: &AnsatzSample, grid: &Grid1D, c0: f64) -> Result<CellAverageReport> {
    let averages = cell_averages(s, a, grid)?;
    Ok(check_averages(averages, c0))
}

pub fn check_averages(averages: CellAverages, c0: f64) -> CellAverageReport {
    let (alpha1, alpha2) = alpha_roots(c0);
    CellAverageReport {
        c0,
        alpha1,
        alpha2,
        averages,
        pass: averages.min() >= alpha1 && averages.max() <= alpha2,
    }
}

/// One row of the diagnostics stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub e: f64,
    pub d: f64,
    pub w: f64,
    pub sup_phi: f64,
    pub sup_psi: f64,
    pub sup_zeta: f64,
    pub h1: f64,
    pub min_v: f64,
    pub max_v: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub mass_drift: f64,
    pub momentum_drift: f64,
    /// `int (phi_x^2 + psi_x^2 + zeta_x^2) dx`; not part of the CSV.
    #[serde(default)]
    pub grad_sq: f64,
    /// Unit-interval averages of `v/V`, `theta/Theta`; not part of the CSV.
    #[serde(default)]
    pub cell_averages: Option<CellAverages>,
}

impl DiagnosticsRecord {
    pub fn sup_all(&self) -> f64 {
        self.sup_phi.max(self.sup_psi).max(self.sup_zeta)
    }

    pub fn csv_row(&self) -> String {
        let vals = [
            self.t,
            self.e,
            self.d,
            self.w,
            self.sup_phi,
            self.sup_psi,
            self.sup_zeta,
            self.h1,
            self.min_v,
            self.max_v,
            self.min_theta,
            self.max_theta,
            self.mass_drift,
            self.momentum_drift,
        ];
        vals.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",")
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let vals: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InsufficientData(format!("bad CSV row: {e}")))?;
        if vals.len() != 14 {
            return Err(Error::InsufficientData(format!("CSV row has {} columns, expected 14", vals.len())));
        }
        Ok(DiagnosticsRecord {
            t: vals[0],
            e: vals[1],
            d: vals[2],
            w: vals[3],
            sup_phi: vals[4],
            sup_psi: vals[5],
            sup_zeta: vals[6],
            h1: vals[7],
            min_v: vals[8],
            max_v: vals[9],
            min_theta: vals[10],
            max_theta: vals[11],
            mass_drift: vals[12],
            momentum_drift: vals[13],
            grad_sq: 0.0,
            cell_averages: None,
        })
    }
}

/// Computes every functional of one record.
pub fn evaluate<F: FarField + ?Sized>(
    s: &SimulationState,
    far: &F,
    grid: &Grid1D,
    g: &GasParams,
    alpha: f64,
    with_cell_averages: bool,
) -> Result<(DiagnosticsRecord, AnsatzSample, PerturbationField)> {
    let a = AnsatzSample::at(far, grid, s.t)?;
    let p = perturbation(s, &a, grid);
    let grad_sq = gradient_sq(&p);
    let cell = if with_cell_averages { Some(cell_averages(s, &a, grid)?) } else { None };
    let rec = DiagnosticsRecord {
        t: s.t,
        e: basic_energy(&p, s, &a, g),
        d: dissipation(&p, s, g),
        w: window_norm(&p, s.t, alpha),
        sup_phi: p.sup_phi(),
        sup_psi: p.sup_psi(),
        sup_zeta: p.sup_zeta(),
        h1: (l2_sq(&p) + grad_sq).sqrt(),
        min_v: s.min_v(),
        max_v: s.max_v(),
        min_theta: s.min_theta(),
        max_theta: s.max_theta(),
        mass_drift: s.mass_drift(grid),
        momentum_drift: s.momentum_drift(grid),
        grad_sq,
        cell_averages: cell,
    };
    Ok((rec, a, p))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

/// Records diagnostics into memory and, optionally, a CSV file plus snapshot files.
pub struct TrajectoryRecorder<'a, F: FarField + ?Sized> {
    far: &'a F,
    gas: GasParams,
    alpha: f64,
    with_cell_averages: bool,
    csv: Option<(PathBuf, BufWriter<File>)>,
    snapshot_dir: Option<PathBuf>,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<PathBuf>,
}

impl<'a, F: FarField + ?Sized> TrajectoryRecorder<'a, F> {
    pub fn new(far: &'a F, gas: GasParams, alpha: f64) -> Self {
        TrajectoryRecorder {
            far,
            gas,
            alpha,
            with_cell_averages: false,
            csv: None,
            snapshot_dir: None,
            records: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn with_cell_averages(mut self, on: bool) -> Self {
        self.with_cell_averages = on;
        self
    }

    pub fn with_csv(mut self, path: &Path) -> Result<Self> {
        let f = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(f);
        writeln!(w, "{CSV_HEADER}").map_err(io_err(path))?;
        self.csv = Some((path.to_path_buf(), w));
        Ok(self)
    }

    pub fn with_snapshots(mut self, dir: &Path) -> Self {
        self.snapshot_dir = Some(dir.to_path_buf());
        self
    }

    pub fn finish(&mut self) -> Result<()> {
        if let Some((path, w)) = self.csv.as_mut() {
            w.flush().map_err(io_err(path))?;
        }
        Ok(())
    }
}

impl<F: FarField + ?Sized> Recorder for TrajectoryRecorder<'_, F> {
    fn record(&mut self, s: &SimulationState, grid: &Grid1D) -> Result<()> {
        let (rec, _, _) = evaluate(s, self.far, grid, &self.gas, self.alpha, self.with_cell_averages)?;
        if let Some((path, w)) = self.csv.as_mut() {
            writeln!(w, "{}", rec.csv_row()).map_err(io_err(path))?;
        }
        self.records.push(rec);
        Ok(())
    }

    fn snapshot(&mut self, s: &SimulationState, grid: &Grid1D) -> Result<()> {
        let Some(dir) = self.snapshot_dir.as_ref() else {
            return Ok(());
        };
        let path = dir.join(snapshot_name(s.t));
        write_snapshot(&path, s, self.far, grid)?;
        self.snapshots.push(path);
        Ok(())
    }
}

pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t:014.6}.csv")
}

/// Writes `x,v,u,theta,V,U,Theta,phi,psi,zeta` at cell centers.
pub fn write_snapshot<F: FarField + ?Sized>(path: &Path, s: &SimulationState, far: &F, grid: &Grid1D) -> Result<()> {
    let a = AnsatzSample::at(far, grid, s.t)?;
    let p = perturbation(s, &a, grid);
    let f = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(f);
    writeln!(w, "{SNAPSHOT_HEADER}").map_err(io_err(path))?;
    for i in 0..grid.n_cells() {
        let u = 0.5 * (s.u[i] + s.u[i + 1]);
        let row = [a.x[i], s.v[i], u, s.theta[i], a.v[i], a.u[i], a.theta[i], p.phi[i], p.psi[i], p.zeta[i]];
        let line = row.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",");
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a diagnostics CSV written by [`TrajectoryRecorder`].
pub fn read_csv(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::InsufficientData(format!("{} lacks the diagnostics header", path.display())));
    }
    lines.filter(|l| !l.trim().is_empty()).map(DiagnosticsRecord::from_csv_row).collect()
}

/// Pass/fail thresholds of the decay checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Required `sup(t_0) / sup(t_end)` of the combined perturbation.
    #[serde(default = "Thresholds::default_min_decay_factor")]
    pub min_decay_factor: f64,
    /// `E(t) <= energy_factor * E(0) + energy_offset`.
    #[serde(default = "Thresholds::default_energy_factor")]
    pub energy_factor: f64,
    #[serde(default = "Thresholds::default_energy_offset")]
    pub energy_offset: f64,
    /// Largest admissible share of `int D dt` from `[t_end/10, t_end]`.
    #[serde(default = "Thresholds::default_final_decade_fraction")]
    pub max_final_decade_fraction: f64,
    /// Largest admissible relative change of the window-inequality constant
    /// between horizons `T/2` and `T`.
    #[serde(default = "Thresholds::default_window_constant_change")]
    pub max_window_constant_change: f64,
    /// Records with `t` below this are excluded from slope fits.
    #[serde(default = "Thresholds::default_slope_t_min")]
    pub slope_t_min: f64,
}

impl Thresholds {
    fn default_min_decay_factor() -> f64 {
        5.0
    }
    fn default_energy_factor() -> f64 {
        2.0
    }
    fn default_energy_offset() -> f64 {
        1e-6
    }
    fn default_final_decade_fraction() -> f64 {
        0.2
    }
    fn default_window_constant_change() -> f64 {
        0.5
    }
    fn default_slope_t_min() -> f64 {
        1.0
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_decay_factor: Self::default_min_decay_factor(),
            energy_factor: Self::default_energy_factor(),
            energy_offset: Self::default_energy_offset(),
            max_final_decade_fraction: Self::default_final_decade_fraction(),
            max_window_constant_change: Self::default_window_constant_change(),
            slope_t_min: Self::default_slope_t_min(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantityDecay {
    pub initial: f64,
    pub last: f64,
    /// `initial / last`.
    pub factor: f64,
    /// Slope of `ln sup` against `ln(1 + t)`.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub positivity: bool,
    pub sup_decay: bool,
    pub energy_bounded: bool,
    pub dissipation_plateau: bool,
    pub window_constant_stable: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.positivity && self.sup_decay && self.energy_bounded && self.dissipation_plateau && self.window_constant_stable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub t0: f64,
    pub t_end: f64,
    pub phi: QuantityDecay,
    pub psi: QuantityDecay,
    pub zeta: QuantityDecay,
    pub combined: QuantityDecay,
    pub e0: f64,
    pub e_max: f64,
    pub min_v: f64,
    pub min_theta: f64,
    pub dissipation_integral: f64,
    pub dissipation_running_nondecreasing: bool,
    pub final_decade_fraction: f64,
    /// Smallest `C` with `int W dt <= C (1 + int |grad|^2 dt)` up to `T/2` and `T`.
    pub window_constant_half: f64,
    pub window_constant_full: f64,
    pub thresholds: Thresholds,
    pub verdicts: Verdicts,
    pub pass: bool,
}

fn quantity(t: &[f64], y: &[f64], t_min: f64) -> QuantityDecay {
    let initial = y[0];
    let last = y[y.len() - 1];
    let factor = if last == initial { 1.0 } else { initial / last };
    let (ts, ys): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(&t, &y)| t >= t_min && y > 0.0)
        .map(|(&t, &y)| (1.0 + t, y))
        .unzip();
    let slope = if ts.len() >= 2 { log_log_slope(&ts, &ys) } else { 0.0 };
    QuantityDecay { initial, last, factor, slope }
}

/// Running trapezoid integral.
fn cumulative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; t.len()];
    for i in 1..t.len() {
        acc[i] = acc[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    }
    acc
}

/// Decay factors, slopes and boundedness verdicts of a trajectory.
pub fn decay_report(records: &[DiagnosticsRecord], th: &Thresholds) -> Result<DecayReport> {
    if records.len() < 10 {
        return Err(Error::InsufficientData(format!("{} records, need at least 10", records.len())));
    }
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let t0 = t[0];
    let t_end = t[t.len() - 1];
    if !((1.0 + t_end) >= 10.0 * (1.0 + t0)) {
        return Err(Error::InsufficientData(format!(
            "records span [{t0}, {t_end}], less than a decade in 1 + t"
        )));
    }
    let col = |f: fn(&DiagnosticsRecord) -> f64| records.iter().map(f).collect::<Vec<f64>>();
    let phi = quantity(&t, &col(|r| r.sup_phi), th.slope_t_min);
    let psi = quantity(&t, &col(|r| r.sup_psi), th.slope_t_min);
    let zeta = quantity(&t, &col(|r| r.sup_zeta), th.slope_t_min);
    let combined = quantity(&t, &col(|r| r.sup_all()), th.slope_t_min);

    let e = col(|r| r.e);
    let e0 = e[0];
    let e_max = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_v = col(|r| r.min_v).into_iter().fold(f64::INFINITY, f64::min);
    let min_theta = col(|r| r.min_theta).into_iter().fold(f64::INFINITY, f64::min);

    let d = col(|r| r.d);
    let d_acc = cumulative(&t, &d);
    let d_total = d_acc[d_acc.len() - 1];
    let nondecreasing = d_acc.windows(2).all(|w| w[1] >= w[0]);
    let t_decade = t0 + (t_end - t0) / 10.0;
    let before: Vec<usize> = (0..t.len()).filter(|&i| t[i] <= t_decade).collect();
    let tail_start = *before.last().unwrap_or(&0);
    let tail: f64 = {
        let (ts, ds): (Vec<f64>, Vec<f64>) = (tail_start..t.len()).map(|i| (t[i], d[i])).unzip();
        trapezoid_xy(&ts, &ds)
    };
    let final_decade_fraction = if d_total > 0.0 { tail / d_total } else { 0.0 };

    let w_acc = cumulative(&t, &col(|r| r.w));
    let g_acc = cumulative(&t, &col(|r| r.grad_sq));
    let constant_up_to = |horizon: f64| {
        (0..t.len())
            .filter(|&i| t[i] <= horizon)
            .map(|i| w_acc[i] / (1.0 + g_acc[i]))
            .fold(0.0f64, f64::max)
    };
    let c_half = constant_up_to(t0 + 0.5 * (t_end - t0));
    let c_full = constant_up_to(t_end);
    let change = if c_full > 0.0 { (c_full - c_half).abs() / c_full } else { 0.0 };

    let verdicts = Verdicts {
        positivity: min_v > 0.0 && min_theta > 0.0,
        sup_decay: combined.factor >= th.min_decay_factor,
        energy_bounded: e_max <= th.energy_factor * e0 + th.energy_offset,
        dissipation_plateau: d_total.is_finite() && nondecreasing && final_decade_fraction < th.max_final_decade_fraction,
        window_constant_stable: c_full.is_finite() && change <= th.max_window_constant_change,
    };
    let pass = verdicts.all();
    Ok(DecayReport {
        t0,
        t_end,
        phi,
        psi,
        zeta,
        combined,
        e0,
        e_max,
        min_v,
        min_theta,
        dissipation_integral: d_total,
        dissipation_running_nondecreasing: nondecreasing,
        final_decade_fraction,
        window_constant_half: c_half,
        window_constant_full: c_full,
        thresholds: *th,
        verdicts,
        pass,
    })
}

/// Empirical cell-average constant: `max_t E / (min(R, c_nu) min Theta)`.
/// By Jensen, `Phi(avg) <= avg Phi <= E / (R min Theta)` on any unit interval,
/// and likewise with `c_nu` for the temperature ratio.
pub fn empirical_c0(records: &[DiagnosticsRecord], theta_floor: f64, g: &GasParams) -> f64 {
    let e_max = records.iter().map(|r| r.e).fold(0.0f64, f64::max);
    e_max / (g.r().min(g.c_nu()) * theta_floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::ThermoState;
    use crate::solver::{initialize, Uniform};

    fn setup(n: usize, bump: f64) -> (Grid1D, SimulationState, Uniform, GasParams) {
        let g = GasParams::monatomic(0.5);
        let grid = Grid1D::new(-20.0, 20.0, n).unwrap();
        let far = Uniform(ThermoState { v: 1.0, u: 0.0, theta: 1.0 });
        let s = initialize(
            &far,
            |x| {
                let b = bump * (-(x / 5.0) * (x / 5.0)).exp();
                (b, b, b)
            },
            &grid,
            &g,
        )
        .unwrap();
        (grid, s, far, g)
    }

    #[test]
    fn zero_perturbation_gives_zero_functionals() {
        let (grid, s, far, g) = setup(200, 0.0);
        let (r, _, p) = evaluate(&s, &far, &grid, &g, 0.1, true).unwrap();
        assert_eq!((r.e, r.d, r.w, r.h1, p.sup_all()), (0.0, 0.0, 0.0, 0.0, 0.0));
        let c = cell_average_bounds(&s, &AnsatzSample::at(&far, &grid, 0.0).unwrap(), &grid, 1e-3).unwrap();
        assert!(c.pass && c.averages.min() == 1.0 && c.averages.max() == 1.0);
    }

    #[test]
    fn bump_amplitude_and_energy_scaling() {
        let (grid, s, far, g) = setup(400, 1e-3);
        let (r1, _, p) = evaluate(&s, &far, &grid, &g, 0.1, false).unwrap();
        // nearest centers sit at x = +-dx/2
        let peak = 1e-3 * (-(0.05f64 / 5.0).powi(2)).exp();
        assert!((p.sup_phi() - peak).abs() < 1e-15);
        let (grid2, s2, far2, g2) = setup(400, 2e-3);
        let (r2, _, _) = evaluate(&s2, &far2, &grid2, &g2, 0.1, false).unwrap();
        let ratio = r2.e / r1.e;
        assert!((3.5..=4.5).contains(&ratio));
        let h_ratio = r2.h1 / r1.h1;
        assert!((h_ratio - 2.0).abs() < 1e-10);
    }

    #[test]
    fn window_closed_form() {
        let grid = Grid1D::new(-60.0, 60.0, 24000).unwrap();
        for &(t, alpha) in &[(0.0, 0.2), (3.0, 0.1), (10.0, 0.5)] {
            let w2: Vec<f64> = grid.cell_centers().iter().map(|&x| window(x, t, alpha).powi(2)).collect();
            let q = trapezoid(&w2, grid.dx());
            assert!((q - window_sq_integral(t, alpha)).abs() < 1e-8, "{q}");
        }
    }

    #[test]
    fn roots_of_phi() {
        let (a1, a2) = alpha_roots(std::f64::consts::E - 2.0);
        assert!((a2 - std::f64::consts::E).abs() < 1e-10);
        assert!((phi_entropy(a1) - (std::f64::consts::E - 2.0)).abs() < 1e-12 && a1 < 1.0);
        let (b1, b2) = alpha_roots(1e-8);
        assert!((b1 - 1.0).abs() < 1e-3 && (b2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn narrow_domain_rejected() {
        let g = GasParams::monatomic(0.5);
        let grid = Grid1D::new(0.2, 2.9, 32).unwrap();
        let far = Uniform(ThermoState { v: 1.0, u: 0.0, theta: 1.0 });
        let s = initialize(&far, |_| (0.0, 0.0, 0.0), &grid, &g).unwrap();
        let a = AnsatzSample::at(&far, &grid, 0.0).unwrap();
        assert!(matches!(cell_average_bounds(&s, &a, &grid, 0.1), Err(Error::DomainTooNarrow(1))));
        let _ = g;
    }

    fn synthetic(f: impl Fn(f64) -> f64) -> Vec<DiagnosticsRecord> {
        (0..=40)
            .map(|k| {
                let t = 10f64.powf(k as f64 / 20.0) - 1.0;
                let y = f(t);
                DiagnosticsRecord {
                    t,
                    e: 1.0,
                    d: 0.0,
                    w: 0.0,
                    sup_phi: y,
                    sup_psi: y,
                    sup_zeta: y,
                    h1: y,
                    min_v: 1.0,
                    max_v: 1.0,
                    min_theta: 1.0,
                    max_theta: 1.0,
                    mass_drift: 0.0,
                    momentum_drift: 0.0,
                    grad_sq: 0.0,
                    cell_averages: None,
                }
            })
            .collect()
    }

    #[test]
    fn decay_report_on_synthetic_records() {
        let th = Thresholds { slope_t_min: 0.0, ..Default::default() };
        let c = decay_report(&synthetic(|_| 0.3), &th).unwrap();
        assert_eq!(c.combined.factor, 1.0);
        assert!(c.combined.slope.abs() < 1e-12);
        let r = decay_report(&synthetic(|t| (1.0 + t).powf(-0.5)), &th).unwrap();
        assert!((r.combined.slope + 0.5).abs() < 0.01);
        assert!(decay_report(&synthetic(|_| 1.0)[..5], &th).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let rec = synthetic(|t| 1.0 / (1.0 + t))[7];
        let back = DiagnosticsRecord::from_csv_row(&rec.csv_row()).unwrap();
        assert_eq!(back.t, rec.t);
        assert_eq!(back.sup_phi, rec.sup_phi);
        assert_eq!(CSV_HEADER.split(',').count(), 14);
    }
}
