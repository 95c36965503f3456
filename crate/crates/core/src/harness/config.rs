//! Run configuration: a flat TOML document with dotted keys.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::Thresholds;
use crate::error::{Error, Result};
use crate::gas::{pressure, GasParams, GasParamsSpec, ThermoState};
use crate::profiles::ProfileOptions;
use crate::solver::{Grid1D, GridSpec, SolverConfig};

/// Key reference printed on configuration errors.
pub const CONFIG_SCHEMA: &str = "\
configuration keys (TOML, dotted keys; unknown keys are rejected):
  seed_label                       string, names the run
  scenario                         contact-only | composite | quiescent | manufactured
  gas.r gas.gamma gas.mu_tilde gas.kappa_tilde gas.beta   required reals
  gas.a gas.alpha                  optional (a defaults to r, alpha to 0)
  end_states.left.{v,u,theta}      left far-field state
  end_states.right.{v,u,theta}     right far-field state
  perturbation.kind                gaussian | none | file          (default none)
  perturbation.shape               uniform | isobaric              (default uniform)
  perturbation.amplitude perturbation.width perturbation.center
  perturbation.path                CSV with x,dv,du,dtheta rows (kind = file)
  grid.x_min grid.x_max grid.n_cells
  solver.t_end                     required
  solver.cfl solver.diff_safety solver.record_interval solver.max_steps
  solver.snapshot_times solver.boundary (ansatz-dirichlet)
  profile.l_xi profile.n_nodes profile.tol
  thresholds.min_decay_factor thresholds.energy_factor thresholds.energy_offset
  thresholds.max_final_decade_fraction thresholds.max_window_constant_change
  thresholds.slope_t_min
  diagnostics.window_alpha         optional, defaults to fitted c1/4
  diagnostics.cell_averages        true | false                  (default true)
  diagnostics.quiescent_tolerance  sup-norm bound of quiescent runs (default 1e-10)
  manufactured.amplitude_v manufactured.amplitude_theta manufactured.wavenumber
  manufactured.max_error           L2 error bound at t_end (default 1e-2)
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    ContactOnly,
    Composite,
    Quiescent,
    Manufactured,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::ContactOnly => "contact-only",
            Scenario::Composite => "composite",
            Scenario::Quiescent => "quiescent",
            Scenario::Manufactured => "manufactured",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndStates {
    pub left: ThermoState,
    pub right: ThermoState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    Gaussian,
    #[default]
    None,
    File,
}

/// How a scalar bump `b(x)` is distributed over `(phi, psi, zeta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationShape {
    /// `(b, b, b)`.
    #[default]
    Uniform,
    /// `zeta = b`, `phi = b V / Theta`, `psi = 0`: leaves the pressure of the
    /// ansatz unchanged, so no acoustic pulse is launched at `t = 0`.
    Isobaric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    #[serde(default)]
    pub kind: PerturbationKind,
    #[serde(default)]
    pub shape: PerturbationShape,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "PerturbationSpec::default_width")]
    pub width: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl PerturbationSpec {
    fn default_width() -> f64 {
        1.0
    }
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        PerturbationSpec {
            kind: PerturbationKind::None,
            shape: PerturbationShape::Uniform,
            amplitude: 0.0,
            width: Self::default_width(),
            center: 0.0,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_alpha: Option<f64>,
    #[serde(default = "DiagnosticsOptions::default_cell_averages")]
    pub cell_averages: bool,
    #[serde(default = "DiagnosticsOptions::default_quiescent_tolerance")]
    pub quiescent_tolerance: f64,
}

impl DiagnosticsOptions {
    fn default_cell_averages() -> bool {
        true
    }
    fn default_quiescent_tolerance() -> f64 {
        1e-10
    }
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions {
            window_alpha: None,
            cell_averages: Self::default_cell_averages(),
            quiescent_tolerance: Self::default_quiescent_tolerance(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSpec {
    pub amplitude_v: f64,
    pub amplitude_theta: f64,
    pub wavenumber: f64,
    #[serde(default = "ManufacturedSpec::default_max_error")]
    pub max_error: f64,
}

impl ManufacturedSpec {
    fn default_max_error() -> f64 {
        1e-2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed_label: String,
    pub scenario: Scenario,
    pub gas: GasParamsSpec,
    pub end_states: EndStates,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    #[serde(default)]
    pub profile: ProfileOptions,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub diagnostics: DiagnosticsOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manufactured: Option<ManufacturedSpec>,
}

/// Tolerance of the contact compatibility condition `u_- = u_+`, `p_- = p_+`.
pub const CONTACT_COMPAT_TOL: f64 = 1e-8;

fn invalid(m: impl Into<String>) -> Error {
    Error::ValidationError(m.into())
}

impl RunConfig {
    pub fn gas_params(&self) -> Result<GasParams> {
        GasParams::try_from(self.gas)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::try_from(self.grid)
    }

    /// Checks every sub-configuration and the scenario invariants.
    pub fn validate(&self) -> Result<()> {
        let wrap = |e: Error| invalid(e.to_string());
        let g = self.gas_params().map_err(wrap)?;
        self.grid().map_err(wrap)?;
        self.solver.validate().map_err(wrap)?;
        let (l, r) = (&self.end_states.left, &self.end_states.right);
        l.validate().map_err(|e| invalid(format!("end_states.left: {e}")))?;
        r.validate().map_err(|e| invalid(format!("end_states.right: {e}")))?;
        if !(self.profile.l_xi > 0.0 && self.profile.n_nodes >= 5 && self.profile.tol > 0.0) {
            return Err(invalid("profile needs l_xi > 0, n_nodes >= 5, tol > 0"));
        }
        let p = &self.perturbation;
        if !(p.width > 0.0 && p.width.is_finite()) {
            return Err(invalid(format!("perturbation.width must be positive, got {}", p.width)));
        }
        if !p.amplitude.is_finite() || !p.center.is_finite() {
            return Err(invalid("perturbation amplitude and center must be finite"));
        }
        if p.kind == PerturbationKind::File && p.path.is_none() {
            return Err(invalid("perturbation.kind = file needs perturbation.path"));
        }
        let th = &self.thresholds;
        if !(th.min_decay_factor > 0.0 && th.energy_factor > 0.0 && th.energy_offset >= 0.0) {
            return Err(invalid("thresholds must be positive"));
        }
        if let Some(a) = self.diagnostics.window_alpha {
            if !(a > 0.0) {
                return Err(invalid(format!("diagnostics.window_alpha must be positive, got {a}")));
            }
        }
        match self.scenario {
            Scenario::ContactOnly | Scenario::Composite if g.alpha() != 0.0 => {
                return Err(invalid(format!(
                    "{} scenario requires gas.alpha = 0, got {}",
                    self.scenario.as_str(),
                    g.alpha()
                )));
            }
            _ => {}
        }
        match self.scenario {
            Scenario::ContactOnly => {
                let du = (l.u - r.u).abs();
                let dp = (pressure(l, &g) - pressure(r, &g)).abs();
                if du > CONTACT_COMPAT_TOL || dp > CONTACT_COMPAT_TOL {
                    return Err(invalid(format!(
                        "contact-only scenario needs u_- = u_+ and p_- = p_+ within {CONTACT_COMPAT_TOL:e} (|du| = {du:e}, |dp| = {dp:e})"
                    )));
                }
            }
            Scenario::Quiescent => {
                if l != r {
                    return Err(invalid("quiescent scenario needs identical end states"));
                }
            }
            Scenario::Manufactured => {
                let m = self.manufactured.ok_or_else(|| invalid("manufactured scenario needs the manufactured table"))?;
                if !(m.wavenumber > 0.0 && m.amplitude_v.abs() < 1.0 && m.amplitude_theta.abs() < 1.0 && m.max_error > 0.0) {
                    return Err(invalid("manufactured needs wavenumber > 0 and |amplitudes| < 1"));
                }
            }
            Scenario::Composite => {}
        }
        Ok(())
    }

    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
            Error::ParseError {
                line,
                message: e.message().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flat dotted-key rendering; parsing it yields an identical config.
    pub fn to_toml_string(&self) -> Result<String> {
        let value = toml::Value::try_from(self).map_err(|e| invalid(format!("cannot serialize config: {e}")))?;
        let mut out = String::new();
        flatten(&mut out, "", &value);
        Ok(out)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?).map_err(|e| Error::io(path, e))
    }

    /// Same run with the domain doubled about its center at unchanged spacing.
    pub fn with_doubled_domain(&self) -> Self {
        let mut c = self.clone();
        let mid = 0.5 * (self.grid.x_min + self.grid.x_max);
        let half = self.grid.x_max - mid;
        c.grid = GridSpec {
            x_min: mid - 2.0 * half,
            x_max: mid + 2.0 * half,
            n_cells: 2 * self.grid.n_cells,
        };
        c.seed_label = format!("{}-doubled", self.seed_label);
        c
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn key_part(k: &str) -> String {
    if !k.is_empty() && k.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-') {
        k.to_string()
    } else {
        format!("{:?}", k)
    }
}

fn flatten(out: &mut String, prefix: &str, v: &toml::Value) {
    match v {
        toml::Value::Table(t) => {
            for (k, child) in t {
                let key = if prefix.is_empty() { key_part(k) } else { format!("{prefix}.{}", key_part(k)) };
                flatten(out, &key, child);
            }
        }
        leaf => {
            let _ = writeln!(out, "{prefix} = {leaf}");
        }
    }
}

/// Reads, parses and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = RunConfig::from_toml_str(&text)?;
    // perturbation files are resolved next to the config
    if let Some(p) = cfg.perturbation.path.as_mut() {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(cfg)
}
