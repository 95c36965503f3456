//! Manufactured smooth solution with hand-derived forcing, for order checks.
//!
//! ```text
//! v     = 1 + a sin(k x) cos t
//! u     = (a / k) cos(k x) sin t          (so that v_t = u_x exactly)
//! theta = 1 + c cos(k x) cos t
//! ```

use crate::error::Result;
use crate::gas::{GasParams, ThermoState};
use crate::solver::FarField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub a: f64,
    pub c: f64,
    pub k: f64,
    pub gas: GasParams,
}

/// Field values and the derivatives the forcing needs.
struct Jet {
    v: f64,
    u: f64,
    th: f64,
    v_x: f64,
    u_t: f64,
    u_x: f64,
    u_xx: f64,
    th_t: f64,
    th_x: f64,
    th_xx: f64,
}

impl Manufactured {
    pub fn new(a: f64, c: f64, k: f64, gas: GasParams) -> Self {
        Manufactured { a, c, k, gas }
    }

    fn jet(&self, x: f64, t: f64) -> Jet {
        let (a, c, k) = (self.a, self.c, self.k);
        let (sk, ck) = (k * x).sin_cos();
        let (st, ct) = t.sin_cos();
        let b = a / k;
        Jet {
            v: 1.0 + a * sk * ct,
            u: b * ck * st,
            th: 1.0 + c * ck * ct,
            v_x: a * k * ck * ct,
            u_t: b * ck * ct,
            u_x: -b * k * sk * st,
            u_xx: -b * k * k * ck * st,
            th_t: -c * ck * st,
            th_x: -c * k * sk * ct,
            th_xx: -c * k * k * ck * ct,
        }
    }

    pub fn exact(&self, x: f64, t: f64) -> ThermoState {
        let j = self.jet(x, t);
        ThermoState { v: j.v, u: j.u, theta: j.th }
    }
}

impl FarField for Manufactured {
    fn state_at(&self, x: f64, t: f64) -> Result<ThermoState> {
        Ok(self.exact(x, t))
    }

    /// `s_u = u_t + p_x - (mu u_x / v)_x`,
    /// `s_theta = c_nu theta_t + p u_x - (kappa theta_x / v)_x - mu u_x^2 / v`.
    fn source(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let g = &self.gas;
        let j = self.jet(x, t);
        let r = g.r();
        let p = r * j.th / j.v;
        let p_x = r * (j.th_x / j.v - j.th * j.v_x / (j.v * j.v));
        let mu = g.viscosity(j.th);
        let mu_x = g.alpha() * mu / j.th * j.th_x;
        let visc_x = mu_x * j.u_x / j.v + mu * j.u_xx / j.v - mu * j.u_x * j.v_x / (j.v * j.v);
        let beta = g.beta();
        let tb = j.th.powf(beta);
        let heat_x =
            g.kappa_tilde() * (beta * tb / j.th * j.th_x * j.th_x / j.v + tb * j.th_xx / j.v - tb * j.th_x * j.v_x / (j.v * j.v));
        let s_u = j.u_t + p_x - visc_x;
        let s_th = g.c_nu() * j.th_t + p * j.u_x - heat_x - mu * j.u_x * j.u_x / j.v;
        (0.0, s_u, s_th)
    }

    fn has_source(&self) -> bool {
        true
    }
}
