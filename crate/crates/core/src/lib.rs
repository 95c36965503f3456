//! Viscous contact waves and composite wave patterns for the one-dimensional
//! compressible Navier–Stokes equations in Lagrangian coordinates.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod gas;
pub mod harness;
pub mod numerics;
pub mod profiles;
pub mod riemann;
pub mod solver;

pub use error::{Error, Result};
pub use gas::{GasParams, ThermoState};
