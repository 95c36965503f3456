//! Composite wave: smooth 1-rarefaction + viscous contact + smooth
//! 3-rarefaction, superposed with the middle state subtracted, together with
//! the source terms it leaves in the momentum and energy equations.

use crate::error::Result;
use crate::gas::{GasParams, ThermoState};
use crate::profiles::contact::{solve_contact_profile, ContactJet, ContactProfile, ProfileOptions};
use crate::profiles::rarefaction::{RarefactionJet, RarefactionWave};
use crate::riemann::{Family, WaveDecomposition};

/// Ansatz fields and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompositeJet {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub p: f64,
    pub v_x: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub theta_x: f64,
    pub theta_xx: f64,
    pub contact: ContactJet,
    pub left: RarefactionJet,
    pub right: RarefactionJet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeAnsatz {
    pub decomposition: WaveDecomposition,
    pub contact: ContactProfile,
    pub left: RarefactionWave,
    pub right: RarefactionWave,
    gas: GasParams,
}

/// `(Theta^beta Theta_x / V)_x` from pointwise derivatives.
#[inline]
fn heat_flux_x(theta: f64, theta_x: f64, theta_xx: f64, v: f64, v_x: f64, beta: f64) -> f64 {
    let tb = theta.powf(beta);
    beta * tb / theta * theta_x * theta_x / v + tb * theta_xx / v - tb * theta_x * v_x / (v * v)
}

impl CompositeAnsatz {
    pub fn new(decomposition: &WaveDecomposition, g: &GasParams, opts: &ProfileOptions) -> Result<Self> {
        let d = decomposition;
        let contact = solve_contact_profile(d.left_mid.theta, d.right_mid.theta, d.p_mid, g, opts)?;
        Ok(CompositeAnsatz {
            decomposition: *d,
            contact,
            left: RarefactionWave::new(Family::One, d.left, d.left_mid, g)?,
            right: RarefactionWave::new(Family::Three, d.right, d.right_mid, g)?,
            gas: *g,
        })
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn jet(&self, x: f64, t: f64) -> Result<CompositeJet> {
        let d = &self.decomposition;
        let c = self.contact.jet(x, t);
        let l = self.left.jet(x, t)?;
        let r = self.right.jet(x, t)?;
        let v = c.v + l.v + r.v - d.left_mid.v - d.right_mid.v;
        let u = c.u + l.u + r.u - d.u_mid();
        let theta = c.theta + l.theta + r.theta - d.left_mid.theta - d.right_mid.theta;
        Ok(CompositeJet {
            v,
            u,
            theta,
            p: self.gas.r() * theta / v,
            v_x: c.v_x + l.v_x + r.v_x,
            u_x: c.u_x + l.u_x + r.u_x,
            u_xx: c.u_xx + l.u_xx + r.u_xx,
            theta_x: c.theta_x + l.theta_x + r.theta_x,
            theta_xx: c.theta_xx + l.theta_xx + r.theta_xx,
            contact: c,
            left: l,
            right: r,
        })
    }

    /// `(V, U, Theta)` of the ansatz.
    pub fn eval(&self, x: f64, t: f64) -> Result<ThermoState> {
        let j = self.jet(x, t)?;
        Ok(ThermoState {
            v: j.v,
            u: j.u,
            theta: j.theta,
        })
    }

    /// Sources `(F, G)` such that the ansatz satisfies
    /// `U_t + P_x = (mu U_x / V)_x - F` and
    /// `c_nu Theta_t + P U_x = (kappa Theta_x / V)_x + mu U_x^2 / V - G`.
    pub fn sources(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let g = &self.gas;
        let j = self.jet(x, t)?;
        let (c, l, r) = (&j.contact, &j.left, &j.right);
        let p_x = g.r() * (j.theta_x / j.v - j.theta * j.v_x / (j.v * j.v));
        let mu = g.viscosity(j.theta);
        let dmu = g.alpha() * mu / j.theta * j.theta_x;
        let visc_x = mu * (j.u_xx / j.v - j.u_x * j.v_x / (j.v * j.v)) + dmu * j.u_x / j.v;
        let f = l.p_x + r.p_x - p_x + visc_x - c.u_t;

        let p_m = self.decomposition.p_mid;
        let beta = g.beta();
        let h = heat_flux_x(j.theta, j.theta_x, j.theta_xx, j.v, j.v_x, beta);
        let h_cd = heat_flux_x(c.theta, c.theta_x, c.theta_xx, c.v, c.v_x, beta);
        let gsrc = (p_m - j.p) * c.u_x
            + (l.p - j.p) * l.u_x
            + (r.p - j.p) * r.u_x
            + mu * j.u_x * j.u_x / j.v
            + g.kappa_tilde() * (h - h_cd);
        Ok((f, gsrc))
    }

    /// Largest deviation of the ansatz from the far-field states at `-x_far` and `+x_far`.
    pub fn far_field_error(&self, x_far: f64, t: f64) -> Result<f64> {
        let d = &self.decomposition;
        let a = self.eval(-x_far, t)?;
        let b = self.eval(x_far, t)?;
        let dev = |s: &ThermoState, f: &ThermoState| (s.v - f.v).abs().max((s.u - f.u).abs()).max((s.theta - f.theta).abs());
        Ok(dev(&a, &d.left).max(dev(&b, &d.right)))
    }

    /// Inviscid pattern: centered fans with the contact discontinuity at `x = 0`.
    pub fn inviscid(&self, x: f64, t: f64) -> ThermoState {
        if x < 0.0 {
            self.left.fan(x, t)
        } else {
            self.right.fan(x, t)
        }
    }
}
