//! Smooth approximate rarefaction via the inviscid Burgers equation
//! `w_t + w w_x = 0` with `w(x, 0) = (w_l + w_r)/2 + (w_r - w_l)/2 tanh x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::safeguarded_newton;

const NEWTON_BUDGET: usize = 200;

/// Burgers wave between `w_l < w_r` (or a constant when they are equal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgersWave {
    pub w_l: f64,
    pub w_r: f64,
}

/// Solution value and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BurgersJet {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    pub w_t: f64,
}

#[inline]
fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl BurgersWave {
    pub fn new(w_l: f64, w_r: f64) -> Result<Self> {
        if !(w_l.is_finite() && w_r.is_finite()) || w_l > w_r {
            return Err(Error::InvalidProfile(format!(
                "burgers wave needs finite w_l <= w_r (got {w_l}, {w_r})"
            )));
        }
        Ok(BurgersWave { w_l, w_r })
    }

    pub fn jump(&self) -> f64 {
        self.w_r - self.w_l
    }

    /// Initial datum and its first two derivatives. The logistic form keeps
    /// full relative precision of `w0 - w_l` and `w_r - w0` in the tails.
    pub fn initial(&self, y: f64) -> (f64, f64, f64) {
        let dw = self.jump();
        let lo = logistic(2.0 * y);
        let hi = logistic(-2.0 * y);
        let w0 = if y < 0.0 { self.w_l + dw * lo } else { self.w_r - dw * hi };
        let d1 = 2.0 * dw * lo * hi;
        let d2 = -2.0 * d1 * y.tanh();
        (w0, d1, d2)
    }

    /// Solves `w = w0(x - w t)` by safeguarded Newton on `[w_l, w_r]`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidProfile(format!("burgers wave evaluated at t = {t} < 0")));
        }
        if self.w_l == self.w_r {
            return Ok(self.w_l);
        }
        if t == 0.0 {
            return Ok(self.initial(x).0);
        }
        let residual = |w: f64| {
            let (w0, d1, _) = self.initial(x - w * t);
            (w - w0, 1.0 + t * d1)
        };
        let guess = (x / t).clamp(self.w_l, self.w_r);
        safeguarded_newton(residual, self.w_l, self.w_r, guess, 1e-15, 1e-14, NEWTON_BUDGET, "profiles")
    }

    /// Value with `w_x = w0'/(1 + t w0')`, `w_xx = w0''/(1 + t w0')^3` and
    /// `w_t = -w w_x`, all evaluated at the foot `y = x - w t`.
    pub fn jet(&self, x: f64, t: f64) -> Result<BurgersJet> {
        let w = self.eval(x, t)?;
        if self.w_l == self.w_r {
            return Ok(BurgersJet { w, ..Default::default() });
        }
        let (_, d1, d2) = self.initial(x - w * t);
        let den = 1.0 + t * d1;
        let w_x = d1 / den;
        Ok(BurgersJet {
            w,
            w_x,
            w_xx: d2 / (den * den * den),
            w_t: -w * w_x,
        })
    }

    /// Exact centered fan `clamp(x/t, w_l, w_r)`.
    pub fn fan(&self, x: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return if x < 0.0 { self.w_l } else { self.w_r };
        }
        (x / t).clamp(self.w_l, self.w_r)
    }
}
