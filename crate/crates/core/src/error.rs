use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the library. Each variant names the module that
/// produced it so failure manifests can record the origin.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gas parameters invalid: {0}")]
    InvalidGas(String),

    #[error("thermodynamic state invalid: {0}")]
    InvalidState(String),

    #[error("riemann: rarefaction curve requires v_target >= anchor.v (got {v_target} < {v_anchor})")]
    InvalidCurveDirection { v_anchor: f64, v_target: f64 },

    #[error("riemann: right state is not in the R1-C-R3 region of the left state ({0})")]
    NotInR1CR3(String),

    #[error("{context}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("profiles: xi-domain too small, boundary slope {slope:e} exceeds {limit:e}")]
    DomainTooSmall { slope: f64, limit: f64 },

    #[error("profiles: {0}")]
    InvalidProfile(String),

    #[error("solver: non-positive initial data at x = {x} ({field} = {value})")]
    NonPositiveInitialData {
        x: f64,
        field: &'static str,
        value: f64,
    },

    #[error("solver: positivity lost at t = {t} in cell {cell} ({field} = {value})")]
    PositivityLoss {
        t: f64,
        cell: usize,
        field: &'static str,
        value: f64,
    },

    #[error("solver: boundary data unavailable at x = {x}, t = {t}")]
    BoundaryUnavailable { x: f64, t: f64 },

    #[error("solver: maximum step count {0} exceeded")]
    MaxStepsExceeded(usize),

    #[error("solver: invalid configuration: {0}")]
    InvalidSolverConfig(String),

    #[error("diagnostics: domain too narrow for unit-cell averages ({0} unit cells, need 3)")]
    DomainTooNarrow(usize),

    #[error("diagnostics: insufficient data: {0}")]
    InsufficientData(String),

    #[error("config parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("config validation error: {0}")]
    ValidationError(String),

    #[error("io error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// Module that produced the error, used in failure manifests.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidGas(_) | Error::InvalidState(_) => "gas-model",
            Error::InvalidCurveDirection { .. } | Error::NotInR1CR3(_) => "riemann",
            Error::NoConvergence { context, .. } => context,
            Error::DomainTooSmall { .. } | Error::InvalidProfile(_) => "profiles",
            Error::NonPositiveInitialData { .. }
            | Error::PositivityLoss { .. }
            | Error::BoundaryUnavailable { .. }
            | Error::MaxStepsExceeded(_)
            | Error::InvalidSolverConfig(_) => "solver",
            Error::DomainTooNarrow(_) | Error::InsufficientData(_) => "diagnostics",
            Error::ParseError { .. } | Error::ValidationError(_) | Error::Io { .. } => "harness",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
