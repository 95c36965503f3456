//! Polytropic gas model: equation of state, transport laws, entropy,
//! Lagrangian characteristic speeds and the relative-entropy gauge.
//!
//! All functions are pure; `GasParams` is immutable after construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the gas.
///
/// `c_nu` is never supplied by the caller; it is recomputed as `R/(gamma-1)`
/// whenever parameters are constructed or deserialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GasParamsSpec", into = "GasParamsSpec")]
pub struct GasParams {
    r: f64,
    gamma: f64,
    a: f64,
    c_nu: f64,
    mu_tilde: f64,
    kappa_tilde: f64,
    alpha: f64,
    beta: f64,
}

/// Serialized form of [`GasParams`]; `a` defaults to `r` and `alpha` to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasParamsSpec {
    pub r: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub mu_tilde: f64,
    pub kappa_tilde: f64,
    #[serde(default)]
    pub alpha: f64,
    pub beta: f64,
}

impl TryFrom<GasParamsSpec> for GasParams {
    type Error = Error;

    fn try_from(s: GasParamsSpec) -> Result<Self> {
        GasParams::new(
            s.r,
            s.gamma,
            s.a.unwrap_or(s.r),
            s.mu_tilde,
            s.kappa_tilde,
            s.alpha,
            s.beta,
        )
    }
}

impl From<GasParams> for GasParamsSpec {
    fn from(g: GasParams) -> Self {
        GasParamsSpec {
            r: g.r,
            gamma: g.gamma,
            a: Some(g.a),
            mu_tilde: g.mu_tilde,
            kappa_tilde: g.kappa_tilde,
            alpha: g.alpha,
            beta: g.beta,
        }
    }
}

impl GasParams {
    pub fn new(
        r: f64,
        gamma: f64,
        a: f64,
        mu_tilde: f64,
        kappa_tilde: f64,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidGas(format!("{name} must be positive and finite, got {x}")))
            }
        };
        positive("R", r)?;
        positive("A", a)?;
        positive("mu_tilde", mu_tilde)?;
        positive("kappa_tilde", kappa_tilde)?;
        positive("beta", beta)?;
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidGas(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidGas(format!("alpha must be >= 0, got {alpha}")));
        }
        Ok(GasParams {
            r,
            gamma,
            a,
            c_nu: r / (gamma - 1.0),
            mu_tilde,
            kappa_tilde,
            alpha,
            beta,
        })
    }

    /// Monatomic gas with unit constants, `A = R` and the given conductivity exponent.
    pub fn monatomic(beta: f64) -> Self {
        GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0, 1.0, 0.0, beta).expect("valid constants")
    }

    pub fn with_transport(self, mu_tilde: f64, kappa_tilde: f64) -> Result<Self> {
        GasParams::new(self.r, self.gamma, self.a, mu_tilde, kappa_tilde, self.alpha, self.beta)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        GasParams::new(self.r, self.gamma, self.a, self.mu_tilde, self.kappa_tilde, self.alpha, beta)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        GasParams::new(self.r, self.gamma, self.a, self.mu_tilde, self.kappa_tilde, alpha, self.beta)
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }
    #[inline]
    pub fn c_nu(&self) -> f64 {
        self.c_nu
    }
    #[inline]
    pub fn mu_tilde(&self) -> f64 {
        self.mu_tilde
    }
    #[inline]
    pub fn kappa_tilde(&self) -> f64 {
        self.kappa_tilde
    }
    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Viscosity `mu_tilde * theta^alpha`.
    #[inline]
    pub fn viscosity(&self, theta: f64) -> f64 {
        if self.alpha == 0.0 {
            self.mu_tilde
        } else {
            self.mu_tilde * theta.powf(self.alpha)
        }
    }

    /// Heat conductivity `kappa_tilde * theta^beta`.
    #[inline]
    pub fn conductivity(&self, theta: f64) -> f64 {
        self.kappa_tilde * theta.powf(self.beta)
    }
}

/// Pointwise `(v, u, theta)` with `v > 0`, `theta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl ThermoState {
    /// Validated constructor.
    pub fn new(v: f64, u: f64, theta: f64) -> Result<Self> {
        let s = ThermoState { v, u, theta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v.is_finite() && self.v > 0.0) {
            return Err(Error::InvalidState(format!("v must be positive, got {}", self.v)));
        }
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return Err(Error::InvalidState(format!("theta must be positive, got {}", self.theta)));
        }
        if !self.u.is_finite() {
            return Err(Error::InvalidState(format!("u must be finite, got {}", self.u)));
        }
        Ok(())
    }

    /// l1 distance `|dv| + |du| + |dtheta|`, the wave-strength metric.
    pub fn l1_distance(&self, other: &ThermoState) -> f64 {
        (self.v - other.v).abs() + (self.u - other.u).abs() + (self.theta - other.theta).abs()
    }
}

/// Which Lagrangian characteristic: `Minus` is the 1-family, `Plus` the 3-family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// `p = R theta / v`.
#[inline]
pub fn pressure(s: &ThermoState, g: &GasParams) -> f64 {
    g.r * s.theta / s.v
}

/// Entropy-form equation of state `A v^{-gamma} exp((gamma-1) s / R)`.
#[inline]
pub fn pressure_from_entropy(v: f64, s: f64, g: &GasParams) -> f64 {
    g.a * v.powf(-g.gamma) * ((g.gamma - 1.0) * s / g.r).exp()
}

/// `s = R/(gamma-1) ln(R theta / A) + R ln v`.
#[inline]
pub fn entropy(s: &ThermoState, g: &GasParams) -> f64 {
    g.c_nu * (g.r * s.theta / g.a).ln() + g.r * s.v.ln()
}

/// Temperature on the isentrope `s` at volume `v` (inverse of [`entropy`]).
#[inline]
pub fn theta_from_entropy(v: f64, s: f64, g: &GasParams) -> f64 {
    (g.a / g.r) * v.powf(1.0 - g.gamma) * ((g.gamma - 1.0) * s / g.r).exp()
}

/// Transport coefficients `(mu, kappa) = (mu_tilde theta^alpha, kappa_tilde theta^beta)`.
#[inline]
pub fn transport(theta: f64, g: &GasParams) -> (f64, f64) {
    (g.viscosity(theta), g.conductivity(theta))
}

/// Signed Lagrangian characteristic speed `lambda_{+-}(v, s)`.
#[inline]
pub fn lambda_pm(v: f64, s: f64, sign: Sign, g: &GasParams) -> f64 {
    sign.as_f64() * (g.a * g.gamma * v.powf(-g.gamma - 1.0) * ((g.gamma - 1.0) * s / g.r).exp()).sqrt()
}

/// Lagrangian sound speed `sqrt(gamma p / v)` of a state.
#[inline]
pub fn sound_speed(s: &ThermoState, g: &GasParams) -> f64 {
    (g.gamma * pressure(s, g) / s.v).sqrt()
}

/// Relative entropy `Phi(z) = z - ln z - 1`.
#[inline]
pub fn phi_entropy(z: f64) -> f64 {
    // z - 1 - ln z loses accuracy near z = 1; ln_1p keeps it.
    let d = z - 1.0;
    d - d.ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_gas() -> GasParams {
        GasParams::monatomic(0.5)
    }

    #[test]
    fn pressure_golden_values() {
        let g = unit_gas();
        assert_eq!(pressure(&ThermoState::new(1.0, 0.0, 1.0).unwrap(), &g), 1.0);
        assert_eq!(pressure(&ThermoState::new(2.0, 0.0, 1.0).unwrap(), &g), 0.5);
    }

    #[test]
    fn entropy_golden_values() {
        let g = unit_gas();
        let s0 = ThermoState::new(1.0, 0.0, g.a() / g.r()).unwrap();
        assert_eq!(entropy(&s0, &g), 0.0);
        let g2 = GasParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let s1 = ThermoState::new(std::f64::consts::E, 0.0, 1.0).unwrap();
        assert!((entropy(&s1, &g2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn c_nu_is_derived() {
        let g = GasParams::new(2.0, 1.4, 3.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(g.c_nu(), 2.0 / (1.4 - 1.0));
        let json = r#"{"r":2.0,"gamma":1.4,"mu_tilde":1.0,"kappa_tilde":1.0,"beta":1.0}"#;
        let parsed: GasParams = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.c_nu(), 2.0 / (1.4 - 1.0));
        assert_eq!(parsed.a(), 2.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(GasParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(GasParams::new(-1.0, 1.4, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(GasParams::new(1.0, 1.4, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(GasParams::new(1.0, 1.4, 1.0, 1.0, 1.0, -0.5, 1.0).is_err());
        assert!(ThermoState::new(0.0, 0.0, 1.0).is_err());
        assert!(ThermoState::new(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn transport_golden_values() {
        let g = unit_gas();
        assert_eq!(transport(1.0, &g), (g.mu_tilde(), g.kappa_tilde()));
        let g2 = GasParams::new(1.0, 5.0 / 3.0, 1.0, 2.0, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(transport(4.0, &g2), (2.0, 2.0));
    }

    #[test]
    fn conductivity_monotone_on_log_grid() {
        let g = unit_gas();
        let ks: Vec<f64> = (0..100)
            .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0))
            .map(|th| transport(th, &g).1)
            .collect();
        assert!(ks.windows(2).all(|w| w[1] > w[0]));
        assert!(ks.iter().all(|k| k.is_finite() && *k > 0.0));
    }

    #[test]
    fn phi_golden_values() {
        assert_eq!(phi_entropy(1.0), 0.0);
        let e = std::f64::consts::E;
        assert!((phi_entropy(e) - (e - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn phi_quadratic_lower_bound() {
        for i in 0..=1000 {
            let z = 0.1 + 9.9 * i as f64 / 1000.0;
            let bound = (z - 1.0).powi(2) / (2.0 * f64::max(1.0, z).powi(2));
            assert!(phi_entropy(z) >= bound - 1e-15, "z = {z}");
        }
    }

    #[test]
    fn phi_convex_on_log_grid() {
        let zs: Vec<f64> = (0..400).map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / 399.0)).collect();
        for &z in &zs {
            let h = 1e-4 * z;
            let d2 = (phi_entropy(z + h) - 2.0 * phi_entropy(z) + phi_entropy(z - h)) / (h * h);
            assert!(d2 >= 0.0, "z = {z}, d2 = {d2}");
        }
    }

    #[test]
    fn lambda_sign_symmetry() {
        let g = unit_gas();
        for &(v, s) in &[(0.5, -1.0), (1.0, 0.0), (3.0, 2.5)] {
            assert_eq!(lambda_pm(v, s, Sign::Minus, &g), -lambda_pm(v, s, Sign::Plus, &g));
            assert!(lambda_pm(v, s, Sign::Plus, &g) > 0.0);
        }
    }

    #[test]
    fn lambda_decreasing_in_v() {
        let g = unit_gas();
        let s = 0.3;
        let lam: Vec<f64> = (1..200).map(|i| lambda_pm(0.05 * i as f64, s, Sign::Plus, &g)).collect();
        assert!(lam.windows(2).all(|w| w[1] - w[0] < 0.0));
    }

    proptest! {
        #[test]
        fn eos_forms_agree(v in 0.05f64..20.0, theta in 0.05f64..20.0, gamma in 1.05f64..3.0, a in 0.2f64..5.0) {
            let g = GasParams::new(1.3, gamma, a, 1.0, 1.0, 0.0, 1.0).unwrap();
            let st = ThermoState::new(v, 0.0, theta).unwrap();
            let s = entropy(&st, &g);
            let p1 = pressure(&st, &g);
            let p2 = pressure_from_entropy(v, s, &g);
            prop_assert!(((p1 - p2) / p1).abs() < 1e-12);
            let back = theta_from_entropy(v, s, &g);
            prop_assert!(((back - theta) / theta).abs() < 1e-10);
        }

        #[test]
        fn lambda_squared_identity(v in 0.05f64..20.0, theta in 0.05f64..20.0) {
            let g = unit_gas();
            let st = ThermoState::new(v, 0.0, theta).unwrap();
            let s = entropy(&st, &g);
            let lam = lambda_pm(v, s, Sign::Plus, &g);
            let th = theta_from_entropy(v, s, &g);
            let p = pressure(&ThermoState::new(v, 0.0, th).unwrap(), &g);
            prop_assert!((lam * lam * v / (g.gamma() * p) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn transport_positive(theta in 1e-6f64..1e6) {
            let (mu, kappa) = transport(theta, &unit_gas());
            prop_assert!(mu > 0.0 && kappa > 0.0 && kappa.is_finite());
        }
    }
}
