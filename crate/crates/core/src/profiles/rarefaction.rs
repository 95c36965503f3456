//! Smooth rarefaction legs: the state on the family curve whose
//! characteristic speed equals a Burgers solution, `lambda(V) = w`.

use crate::error::Result;
use crate::gas::{pressure, GasParams, ThermoState};
use crate::profiles::burgers::BurgersWave;
use crate::riemann::{curve_velocity, isentrope_speed_constant, Family};

/// Fields and derivatives of one rarefaction leg.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RarefactionJet {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub p: f64,
    pub v_x: f64,
    pub v_xx: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub theta_x: f64,
    pub theta_xx: f64,
    pub p_x: f64,
}

/// A 1- or 3-rarefaction between the outer far-field state and the middle
/// state of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionWave {
    pub family: Family,
    /// Outer state (left state for the 1-family, right state for the 3-family).
    pub outer: ThermoState,
    pub middle: ThermoState,
    pub wave: BurgersWave,
    speed_constant: f64,
    gas: GasParams,
}

impl RarefactionWave {
    pub fn new(family: Family, outer: ThermoState, middle: ThermoState, g: &GasParams) -> Result<Self> {
        let speed_constant = isentrope_speed_constant(&outer, g);
        let lam = |v: f64| family.sign().as_f64() * speed_constant * v.powf(-0.5 * (g.gamma() + 1.0));
        let (a, b) = (lam(outer.v), lam(middle.v));
        let wave = if middle.v == outer.v {
            BurgersWave::new(a, a)?
        } else {
            BurgersWave::new(a.min(b), a.max(b))?
        };
        Ok(RarefactionWave {
            family,
            outer,
            middle,
            wave,
            speed_constant,
            gas: *g,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.wave.w_l == self.wave.w_r
    }

    /// State on the curve where the characteristic speed equals `w`.
    pub fn state_at_speed(&self, w: f64) -> ThermoState {
        let g = &self.gas;
        if self.is_trivial() {
            return self.middle;
        }
        let v = (self.speed_constant / w.abs()).powf(2.0 / (g.gamma() + 1.0));
        let v = if v < self.outer.v { self.outer.v } else { v };
        ThermoState {
            v,
            u: curve_velocity(&self.outer, v, self.family, g),
            theta: self.outer.theta * (self.outer.v / v).powf(g.gamma() - 1.0),
        }
    }

    /// Smooth wave at `(x, t)` with analytic derivatives.
    pub fn jet(&self, x: f64, t: f64) -> Result<RarefactionJet> {
        let g = &self.gas;
        if self.is_trivial() {
            return Ok(RarefactionJet {
                v: self.middle.v,
                u: self.middle.u,
                theta: self.middle.theta,
                p: pressure(&self.middle, g),
                ..Default::default()
            });
        }
        let b = self.wave.jet(x, t)?;
        let s = self.state_at_speed(b.w);
        let q = 2.0 / (g.gamma() + 1.0);
        let dv = -q * s.v / b.w;
        let d2v = q * (q + 1.0) * s.v / (b.w * b.w);
        let v_x = dv * b.w_x;
        let v_xx = d2v * b.w_x * b.w_x + dv * b.w_xx;
        let u_x = -b.w * v_x;
        let u_xx = -b.w_x * v_x - b.w * v_xx;
        let c = 1.0 - g.gamma();
        let theta_x = c * s.theta / s.v * v_x;
        let theta_xx = c * (theta_x * v_x / s.v - s.theta * v_x * v_x / (s.v * s.v) + s.theta * v_xx / s.v);
        let p = pressure(&s, g);
        Ok(RarefactionJet {
            v: s.v,
            u: s.u,
            theta: s.theta,
            p,
            v_x,
            v_xx,
            u_x,
            u_xx,
            theta_x,
            theta_xx,
            p_x: -g.gamma() * p / s.v * v_x,
        })
    }

    /// `(V, U, Theta)` of the smooth wave.
    pub fn eval(&self, x: f64, t: f64) -> Result<(f64, f64, f64)> {
        let j = self.jet(x, t)?;
        Ok((j.v, j.u, j.theta))
    }

    /// Exact centered rarefaction fan at `(x, t)`.
    pub fn fan(&self, x: f64, t: f64) -> ThermoState {
        self.state_at_speed(self.wave.fan(x, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::lambda_pm;
    use crate::gas::entropy;
    use crate::riemann::rarefaction_curve;

    fn legs() -> Vec<RarefactionWave> {
        let g = GasParams::monatomic(0.5);
        let left = ThermoState { v: 1.0, u: 0.0, theta: 1.0 };
        let lm = rarefaction_curve(&left, 1.2, Family::One, &g).unwrap();
        let right = ThermoState { v: 0.9, u: 0.4, theta: 1.3 };
        let rm = rarefaction_curve(&right, 1.1, Family::Three, &g).unwrap();
        vec![
            RarefactionWave::new(Family::One, left, lm, &g).unwrap(),
            RarefactionWave::new(Family::Three, right, rm, &g).unwrap(),
        ]
    }

    #[test]
    fn far_field_limits() {
        for r in legs() {
            let (far_l, far_r) = match r.family {
                Family::One => (r.outer, r.middle),
                Family::Three => (r.middle, r.outer),
            };
            let (v, u, th) = r.eval(-200.0, 1.0).unwrap();
            assert!((v - far_l.v).abs() < 1e-12 && (u - far_l.u).abs() < 1e-12 && (th - far_l.theta).abs() < 1e-12);
            let (v, u, th) = r.eval(200.0, 1.0).unwrap();
            assert!((v - far_r.v).abs() < 1e-12 && (u - far_r.u).abs() < 1e-12 && (th - far_r.theta).abs() < 1e-12);
        }
    }

    #[test]
    fn speed_matches_burgers_and_entropy_constant() {
        let g = GasParams::monatomic(0.5);
        for r in legs() {
            let s0 = entropy(&r.outer, &g);
            for i in -10..=10 {
                let x = i as f64 * 0.5;
                let j = r.jet(x, 3.0).unwrap();
                let st = ThermoState { v: j.v, u: j.u, theta: j.theta };
                let w = r.wave.eval(x, 3.0).unwrap();
                assert!((lambda_pm(j.v, s0, r.family.sign(), &g) - w).abs() < 1e-12);
                assert!((entropy(&st, &g) - s0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn euler_equations_hold() {
        // V_t = U_x and U_t + P_x = 0 for the smooth Burgers-driven wave.
        let h = 1e-5;
        for r in legs() {
            for &(x, t) in &[(-1.0, 1.0), (0.2, 4.0), (1.5, 2.0)] {
                let j = r.jet(x, t).unwrap();
                let (v1, u1, _) = r.eval(x, t + h).unwrap();
                let (v0, u0, _) = r.eval(x, t - h).unwrap();
                assert!(((v1 - v0) / (2.0 * h) - j.u_x).abs() < 1e-8);
                assert!(((u1 - u0) / (2.0 * h) + j.p_x).abs() < 1e-8);
                let (vp, up, tp) = r.eval(x + h, t).unwrap();
                let (vm, um, tm) = r.eval(x - h, t).unwrap();
                assert!(((vp - vm) / (2.0 * h) - j.v_x).abs() < 1e-8);
                assert!(((tp - tm) / (2.0 * h) - j.theta_x).abs() < 1e-8);
                assert!(((up - 2.0 * j.u + um) / (h * h) - j.u_xx).abs() < 1e-4);
                assert!(((vp - 2.0 * j.v + vm) / (h * h) - j.v_xx).abs() < 1e-4);
                assert!(((tp - 2.0 * j.theta + tm) / (h * h) - j.theta_xx).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn trivial_leg_is_constant() {
        let g = GasParams::monatomic(0.5);
        let s = ThermoState { v: 1.0, u: 0.1, theta: 1.0 };
        let r = RarefactionWave::new(Family::One, s, s, &g).unwrap();
        assert!(r.is_trivial());
        let j = r.jet(0.0, 1.0).unwrap();
        assert_eq!((j.v, j.u, j.theta, j.v_x, j.u_x), (1.0, 0.1, 1.0, 0.0, 0.0));
    }
}
