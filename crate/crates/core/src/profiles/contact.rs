//! Viscous contact wave built from the self-similar solution of the
//! nonlinear diffusion equation `Theta_t = a_bar (Theta^{beta-1} Theta_x)_x`.
//!
//! With `xi = x / sqrt(1 + t)` the profile solves the two-point problem
//! `a_bar (Theta^{beta-1} Theta')' + (xi / 2) Theta' = 0`, `Theta(-inf) = theta_-`,
//! `Theta(+inf) = theta_+`, discretized here in the flux form
//! `a_bar G(Theta)'' + (xi/2) Theta'` with `G(Theta) = (Theta^beta - 1) / beta`.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasParams, GasParamsSpec};
use crate::numerics::{hermite, linear_fit, solve_tridiagonal};

/// Discretization settings for [`solve_contact_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileOptions {
    #[serde(default = "ProfileOptions::default_l_xi")]
    pub l_xi: f64,
    #[serde(default = "ProfileOptions::default_n_nodes")]
    pub n_nodes: usize,
    #[serde(default = "ProfileOptions::default_tol")]
    pub tol: f64,
}

impl ProfileOptions {
    fn default_l_xi() -> f64 {
        20.0
    }
    fn default_n_nodes() -> usize {
        4001
    }
    fn default_tol() -> f64 {
        1e-10
    }
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            l_xi: Self::default_l_xi(),
            n_nodes: Self::default_n_nodes(),
            tol: Self::default_tol(),
        }
    }
}

/// Largest admissible `|Theta'|` at the ends of the xi-domain, relative to the jump.
const BOUNDARY_SLOPE_LIMIT: f64 = 1e-6;
const NEWTON_BUDGET: usize = 100;

/// Tabulated self-similar temperature profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactProfile {
    xi_min: f64,
    h: f64,
    theta: Vec<f64>,
    dtheta: Vec<f64>,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub p_plus: f64,
    pub a_bar: f64,
    pub decay_c1: f64,
    gas: GasParams,
}

/// Contact-wave fields and their derivatives at one `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContactJet {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub v_x: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub u_t: f64,
    pub theta_x: f64,
    pub theta_xx: f64,
}

#[inline]
fn flux_potential(theta: f64, beta: f64) -> f64 {
    (beta * theta.ln()).exp_m1() / beta
}

/// `a_bar = kappa_tilde (gamma - 1) p_+ / (gamma R^2)`.
pub fn diffusion_prefactor(p_plus: f64, g: &GasParams) -> f64 {
    g.kappa_tilde() * (g.gamma() - 1.0) * p_plus / (g.gamma() * g.r() * g.r())
}

fn discrete_residual(theta: &[f64], xi_min: f64, h: f64, a_bar: f64, beta: f64, out: &mut [f64]) -> f64 {
    let n = theta.len();
    let pot: Vec<f64> = theta.iter().map(|&t| flux_potential(t, beta)).collect();
    let mut max = 0.0f64;
    for i in 1..n - 1 {
        let xi = xi_min + i as f64 * h;
        let r = a_bar * (pot[i + 1] - 2.0 * pot[i] + pot[i - 1]) / (h * h) + xi * (theta[i + 1] - theta[i - 1]) / (4.0 * h);
        out[i] = r;
        max = max.max(r.abs());
    }
    max
}

/// Solves the self-similar boundary value problem by damped Newton on the
/// finite-difference system, starting from a linear ramp.
pub fn solve_contact_profile(
    theta_minus: f64,
    theta_plus: f64,
    p_plus: f64,
    g: &GasParams,
    opts: &ProfileOptions,
) -> Result<ContactProfile> {
    if !(theta_minus > 0.0 && theta_plus > 0.0 && p_plus > 0.0) {
        return Err(Error::InvalidProfile(format!(
            "theta_-, theta_+ and p_+ must be positive (got {theta_minus}, {theta_plus}, {p_plus})"
        )));
    }
    if !(opts.l_xi > 0.0) || opts.n_nodes < 5 || !(opts.tol > 0.0) {
        return Err(Error::InvalidProfile(format!("invalid options {opts:?}")));
    }
    let n = opts.n_nodes;
    let xi_min = -opts.l_xi;
    let h = 2.0 * opts.l_xi / (n - 1) as f64;
    let a_bar = diffusion_prefactor(p_plus, g);
    let beta = g.beta();
    let delta = (theta_plus - theta_minus).abs();

    let mut theta: Vec<f64> = (0..n)
        .map(|i| theta_minus + (theta_plus - theta_minus) * i as f64 / (n - 1) as f64)
        .collect();
    theta[0] = theta_minus;
    theta[n - 1] = theta_plus;

    if delta > 0.0 {
        let mut res = vec![0.0; n];
        let mut norm = discrete_residual(&theta, xi_min, h, a_bar, beta, &mut res);
        let mut iterations = 0;
        while norm > opts.tol {
            if iterations >= NEWTON_BUDGET {
                return Err(Error::NoConvergence {
                    context: "profiles",
                    iterations,
                    residual: norm,
                });
            }
            iterations += 1;
            let m = n - 2;
            let mut lower = vec![0.0; m];
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            let c = a_bar / (h * h);
            for k in 0..m {
                let i = k + 1;
                let xi = xi_min + i as f64 * h;
                let dpot = |t: f64| t.powf(beta - 1.0);
                diag[k] = -2.0 * c * dpot(theta[i]);
                lower[k] = c * dpot(theta[i - 1]) - xi / (4.0 * h);
                upper[k] = c * dpot(theta[i + 1]) + xi / (4.0 * h);
                rhs[k] = -res[i];
            }
            let step = solve_tridiagonal(&lower, &diag, &upper, &rhs).ok_or(Error::NoConvergence {
                context: "profiles",
                iterations,
                residual: norm,
            })?;
            let mut damping = 1.0;
            let mut trial = theta.clone();
            let mut trial_res = vec![0.0; n];
            loop {
                for k in 0..m {
                    trial[k + 1] = theta[k + 1] + damping * step[k];
                }
                let positive = trial.iter().all(|&t| t > 0.0);
                if positive {
                    let trial_norm = discrete_residual(&trial, xi_min, h, a_bar, beta, &mut trial_res);
                    if trial_norm < norm * (1.0 - 1e-4 * damping) || damping < 1e-6 {
                        theta.copy_from_slice(&trial);
                        res.copy_from_slice(&trial_res);
                        norm = trial_norm;
                        break;
                    }
                }
                damping *= 0.5;
                if damping < 1e-9 {
                    return Err(Error::NoConvergence {
                        context: "profiles",
                        iterations,
                        residual: norm,
                    });
                }
            }
        }
    }

    let dtheta = if delta > 0.0 { nodal_derivative(&theta, h) } else { vec![0.0; n] };
    let limit = BOUNDARY_SLOPE_LIMIT * delta.max(f64::MIN_POSITIVE);
    let slope = dtheta[1].abs().max(dtheta[n - 2].abs());
    if delta > 0.0 && slope > limit {
        return Err(Error::DomainTooSmall { slope, limit });
    }

    let mut profile = ContactProfile {
        xi_min,
        h,
        theta,
        dtheta,
        theta_minus,
        theta_plus,
        p_plus,
        a_bar,
        decay_c1: 0.0,
        gas: *g,
    };
    profile.decay_c1 = profile.fit_decay_rate();
    Ok(profile)
}

/// Fourth-order central differences inside, second order next to the ends.
fn nodal_derivative(theta: &[f64], h: f64) -> Vec<f64> {
    let n = theta.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-theta[i + 2] + 8.0 * theta[i + 1] - 8.0 * theta[i - 1] + theta[i - 2]) / (12.0 * h);
    }
    d[1] = (theta[2] - theta[0]) / (2.0 * h);
    d[n - 2] = (theta[n - 1] - theta[n - 3]) / (2.0 * h);
    d[0] = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h);
    d[n - 1] = (3.0 * theta[n - 1] - 4.0 * theta[n - 2] + theta[n - 3]) / (2.0 * h);
    d
}

impl ContactProfile {
    /// Constant profile `Theta = theta0`.
    pub fn constant(theta0: f64, p_plus: f64, g: &GasParams, opts: &ProfileOptions) -> Result<Self> {
        solve_contact_profile(theta0, theta0, p_plus, g, opts)
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.xi_min + i as f64 * self.h
    }

    pub fn xi_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.xi(i)).collect()
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta
    }

    pub fn dtheta_nodes(&self) -> &[f64] {
        &self.dtheta
    }

    pub fn delta(&self) -> f64 {
        (self.theta_plus - self.theta_minus).abs()
    }

    pub fn is_constant(&self) -> bool {
        self.theta_plus == self.theta_minus
    }

    /// Maximum discrete residual of the boundary value problem over interior nodes.
    pub fn max_residual(&self) -> f64 {
        let mut res = vec![0.0; self.len()];
        discrete_residual(&self.theta, self.xi_min, self.h, self.a_bar, self.gas.beta(), &mut res)
    }

    /// `(Theta, Theta')` at `xi`, clamped to `theta_-+` with zero slope off the grid.
    pub fn theta_at(&self, xi: f64) -> (f64, f64) {
        let n = self.len();
        let s = (xi - self.xi_min) / self.h;
        if !(s > 0.0) {
            return (self.theta_minus, 0.0);
        }
        if s >= (n - 1) as f64 {
            return (self.theta_plus, 0.0);
        }
        let i = s.floor() as usize;
        let frac = s - i as f64;
        hermite(self.theta[i], self.theta[i + 1], self.dtheta[i], self.dtheta[i + 1], self.h, frac)
    }

    /// `(V, U, Theta)` of the contact wave at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let j = self.jet(x, t);
        (j.v, j.u, j.theta)
    }

    /// Contact-wave fields with analytic derivatives. Second and third
    /// xi-derivatives come from the profile equation itself.
    pub fn jet(&self, x: f64, t: f64) -> ContactJet {
        let g = &self.gas;
        let s = (1.0 + t).sqrt();
        let xi = x / s;
        let (th, d1) = self.theta_at(xi);
        let r = g.r();
        let v = r * th / self.p_plus;
        if d1 == 0.0 {
            return ContactJet {
                v,
                theta: th,
                ..ContactJet::default()
            };
        }
        let beta = g.beta();
        let k = g.kappa_tilde() * (g.gamma() - 1.0) / (g.gamma() * r);
        let q = th.powf(beta - 1.0);
        let f = q * d1;
        let f1 = -xi * d1 / (2.0 * self.a_bar);
        let d2 = (f1 - (beta - 1.0) * q / th * d1 * d1) / q;
        let f2 = -(d1 + xi * d2) / (2.0 * self.a_bar);
        let s2 = s * s;
        let s3 = s2 * s;
        ContactJet {
            v,
            u: k * f / s,
            theta: th,
            v_x: r * d1 / (self.p_plus * s),
            u_x: k * f1 / s2,
            u_xx: k * f2 / s3,
            u_t: -k * (f + xi * f1) / (2.0 * s3),
            theta_x: d1 / s,
            theta_xx: d2 / s2,
        }
    }

    /// `(R1, R2) = (U_t - (mu U_x / V)_x, -mu U_x^2 / V)`.
    pub fn residuals(&self, x: f64, t: f64) -> (f64, f64) {
        let j = self.jet(x, t);
        if j.u_x == 0.0 && j.u_t == 0.0 && j.u_xx == 0.0 {
            return (0.0, 0.0);
        }
        let g = &self.gas;
        let mu = g.viscosity(j.theta);
        let dmu = if g.alpha() == 0.0 {
            0.0
        } else {
            g.alpha() * mu / j.theta * j.theta_x
        };
        let flux_x = mu * (j.u_xx / j.v - j.u_x * j.v_x / (j.v * j.v)) + dmu * j.u_x / j.v;
        (j.u_t - flux_x, -mu * j.u_x * j.u_x / j.v)
    }

    /// Gaussian decay rate `c` of `|Theta - theta_-+| ~ exp(-c xi^2)`, fitted
    /// on both tails; the smaller rate is returned. Constant profiles fall
    /// back to the linearized rate `1 / (4 a_bar theta^{beta-1})`.
    pub fn fit_decay_rate(&self) -> f64 {
        let beta = self.gas.beta();
        let linear = |th: f64| 1.0 / (4.0 * self.a_bar * th.powf(beta - 1.0));
        let delta = self.delta();
        if delta == 0.0 {
            return linear(self.theta_minus);
        }
        let fit_tail = |end: f64, left: bool| -> f64 {
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (i, &th) in self.theta.iter().enumerate() {
                let xi = self.xi(i);
                if (xi < 0.0) != left {
                    continue;
                }
                let d = (th - end).abs() / delta;
                if (1e-10..=1e-3).contains(&d) {
                    xs.push(xi * xi);
                    ys.push(d.ln());
                }
            }
            if xs.len() < 5 {
                linear(end)
            } else {
                -linear_fit(&xs, &ys).0
            }
        };
        fit_tail(self.theta_minus, true).min(fit_tail(self.theta_plus, false))
    }

    /// Writes the profile as whitespace-separated columns `xi theta dtheta`
    /// preceded by `#`-prefixed `key = value` header lines.
    pub fn write_table(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_table_string()).map_err(|e| Error::io(path, e))
    }

    pub fn to_table_string(&self) -> String {
        let g = &self.gas;
        let mut out = String::new();
        let _ = writeln!(out, "# vcwave contact profile v1");
        for (k, v) in [
            ("theta_minus", self.theta_minus),
            ("theta_plus", self.theta_plus),
            ("p_plus", self.p_plus),
            ("a_bar", self.a_bar),
            ("decay_c1", self.decay_c1),
            ("gas.r", g.r()),
            ("gas.gamma", g.gamma()),
            ("gas.a", g.a()),
            ("gas.mu_tilde", g.mu_tilde()),
            ("gas.kappa_tilde", g.kappa_tilde()),
            ("gas.alpha", g.alpha()),
            ("gas.beta", g.beta()),
        ] {
            let _ = writeln!(out, "# {k} = {v:.16e}");
        }
        let _ = writeln!(out, "# n_nodes = {}", self.len());
        let _ = writeln!(out, "# columns: xi theta dtheta");
        for i in 0..self.len() {
            let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", self.xi(i), self.theta[i], self.dtheta[i]);
        }
        out
    }

    pub fn read_table(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut header = std::collections::BTreeMap::new();
        let (mut xi, mut theta, mut dtheta) = (Vec::new(), Vec::new(), Vec::new());
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let bad = |msg: &str| Error::ParseError {
                line: lineno + 1,
                message: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    header.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|_| bad("non-numeric column")))
                .collect::<Result<_>>()?;
            if cols.len() != 3 {
                return Err(bad("expected 3 columns"));
            }
            xi.push(cols[0]);
            theta.push(cols[1]);
            dtheta.push(cols[2]);
        }
        let get = |k: &str| -> Result<f64> {
            header
                .get(k)
                .ok_or_else(|| Error::ParseError {
                    line: 0,
                    message: format!("missing header key {k}"),
                })?
                .parse::<f64>()
                .map_err(|_| Error::ParseError {
                    line: 0,
                    message: format!("bad header value for {k}"),
                })
        };
        let gas = GasParams::try_from(GasParamsSpec {
            r: get("gas.r")?,
            gamma: get("gas.gamma")?,
            a: Some(get("gas.a")?),
            mu_tilde: get("gas.mu_tilde")?,
            kappa_tilde: get("gas.kappa_tilde")?,
            alpha: get("gas.alpha")?,
            beta: get("gas.beta")?,
        })?;
        if xi.len() < 5 {
            return Err(Error::InvalidProfile("profile table has fewer than 5 rows".into()));
        }
        let h = (xi[xi.len() - 1] - xi[0]) / (xi.len() - 1) as f64;
        Ok(ContactProfile {
            xi_min: xi[0],
            h,
            theta,
            dtheta,
            theta_minus: get("theta_minus")?,
            theta_plus: get("theta_plus")?,
            p_plus: get("p_plus")?,
            a_bar: get("a_bar")?,
            decay_c1: get("decay_c1")?,
            gas,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas(beta: f64) -> GasParams {
        GasParams::monatomic(beta)
    }

    #[test]
    fn constant_profile() {
        let g = gas(0.5);
        let p = ContactProfile::constant(1.3, 1.0, &g, &ProfileOptions::default()).unwrap();
        assert!(p.theta_nodes().iter().all(|&t| t == 1.3));
        assert!(p.dtheta_nodes().iter().all(|&d| d == 0.0));
        for &(x, t) in &[(-3.0, 0.0), (0.0, 5.0), (40.0, 1.0)] {
            assert_eq!(p.eval(x, t), (g.r() * 1.3 / 1.0, 0.0, 1.3));
            assert_eq!(p.residuals(x, t), (0.0, 0.0));
        }
    }

    /// Strictly monotone wherever the deviation from both end values is
    /// representable; in the saturated tails only roundoff-level wiggles.
    fn assert_monotone(p: &ContactProfile, dir: f64) {
        let th = p.theta_nodes();
        let d = p.delta();
        for w in th.windows(2) {
            let step = dir * (w[1] - w[0]);
            let inside = (w[0] - p.theta_minus).abs() > 1e-12 * d && (w[0] - p.theta_plus).abs() > 1e-12 * d;
            if inside {
                assert!(step > 0.0, "non-monotone step {step:e} at {}", w[0]);
            } else {
                assert!(step > -4.0 * f64::EPSILON, "tail wiggle {step:e}");
            }
        }
    }

    #[test]
    fn increasing_profile_is_monotone_and_resolved() {
        for beta in [0.5, 1.0, 2.0] {
            let g = gas(beta);
            let p = solve_contact_profile(1.0, 1.1, 1.0, &g, &ProfileOptions::default()).unwrap();
            assert_monotone(&p, 1.0);
            assert!(p.max_residual() < 1e-8);
            assert!(p.decay_c1 > 0.0);
        }
    }

    #[test]
    fn decreasing_profile_is_monotone() {
        let g = gas(1.0);
        let p = solve_contact_profile(1.1, 1.0, 1.0, &g, &ProfileOptions::default()).unwrap();
        assert_monotone(&p, -1.0);
    }

    #[test]
    fn small_domain_detected() {
        let g = gas(0.5);
        let opts = ProfileOptions {
            l_xi: 1.0,
            n_nodes: 201,
            tol: 1e-10,
        };
        assert!(matches!(
            solve_contact_profile(1.0, 1.1, 1.0, &g, &opts),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn pressure_identity_and_clamping() {
        let g = gas(0.5);
        let p = solve_contact_profile(1.0, 1.1, 0.8, &g, &ProfileOptions::default()).unwrap();
        for i in -50..=50 {
            let x = i as f64 * 0.7;
            let (v, _, th) = p.eval(x, 2.0);
            assert!((g.r() * th / v - 0.8).abs() < 1e-15);
            assert!(p.residuals(x, 2.0).1 <= 0.0);
        }
        assert_eq!(p.eval(1e6, 0.0).2, 1.1);
        assert_eq!(p.eval(-1e6, 0.0).2, 1.0);
    }

    /// For beta = 1 the profile equation is linear and the solution is an error function.
    fn erf_oracle(xi: f64, lo: f64, hi: f64, a_bar: f64) -> (f64, f64, f64) {
        let d = hi - lo;
        let th = lo + 0.5 * d * (1.0 + erf(xi / (2.0 * a_bar.sqrt())));
        let d1 = d / (2.0 * (std::f64::consts::PI * a_bar).sqrt()) * (-xi * xi / (4.0 * a_bar)).exp();
        (th, d1, -xi / (2.0 * a_bar) * d1)
    }

    /// Abramowitz–Stegun independent high-accuracy erf via series/continued fraction.
    fn erf(x: f64) -> f64 {
        if x.abs() < 3.0 {
            // Maclaurin series
            let mut sum = 0.0;
            let mut term = x;
            let mut n = 0.0;
            while term.abs() > 1e-18 {
                sum += term / (2.0 * n + 1.0);
                n += 1.0;
                term *= -x * x / n;
            }
            2.0 / std::f64::consts::PI.sqrt() * sum
        } else {
            // Continued fraction for erfc
            let ax = x.abs();
            let mut f = 0.0;
            for k in (1..60).rev() {
                f = (k as f64 / 2.0) / (ax + f);
            }
            let erfc = (-ax * ax).exp() / std::f64::consts::PI.sqrt() / (ax + f);
            x.signum() * (1.0 - erfc)
        }
    }

    #[test]
    fn linear_case_matches_error_function() {
        let g = gas(1.0);
        let p = solve_contact_profile(1.0, 1.2, 0.9, &g, &ProfileOptions::default()).unwrap();
        let k = g.kappa_tilde() * (g.gamma() - 1.0) / (g.gamma() * g.r());
        for &(x, t) in &[(-2.0f64, 0.0f64), (0.6, 1.5), (0.05, 3.0), (3.0, 9.0)] {
            let s = (1.0 + t).sqrt();
            let xi = x / s;
            let (th, d1, d2) = erf_oracle(xi, 1.0, 1.2, p.a_bar);
            let d3 = -(d1 + xi * d2) / (2.0 * p.a_bar);
            let j = p.jet(x, t);
            // second-order scheme on h = 0.01
            let tol = 5e-6;
            assert!((j.theta - th).abs() < tol);
            assert!((j.theta_x - d1 / s).abs() < tol);
            assert!((j.theta_xx - d2 / (s * s)).abs() < tol);
            assert!((j.u - k * d1 / s).abs() < tol);
            assert!((j.u_x - k * d2 / (s * s)).abs() < tol);
            assert!((j.u_xx - k * d3 / (s * s * s)).abs() < tol);
            assert!((j.u_t + k * (d1 + xi * d2) / (2.0 * s * s * s)).abs() < tol);
        }
        assert!((p.decay_c1 - 1.0 / (4.0 * p.a_bar)).abs() < 0.05 / p.a_bar);
    }

    #[test]
    fn mass_equation_holds_for_contact_wave() {
        // V_t - U_x = 0 follows from the profile equation.
        let g = gas(1.0);
        let p = solve_contact_profile(1.0, 1.2, 1.0, &g, &ProfileOptions::default()).unwrap();
        let h = 1e-4;
        for &(x, t) in &[(-1.0, 0.5), (0.3, 2.0), (2.0, 4.0)] {
            let v_t = (p.eval(x, t + h).0 - p.eval(x, t - h).0) / (2.0 * h);
            let j = p.jet(x, t);
            assert!((v_t - j.u_x).abs() < 1e-6, "{v_t} vs {}", j.u_x);
        }
    }

    #[test]
    fn table_roundtrip() {
        let g = gas(0.5);
        let p = solve_contact_profile(1.0, 1.1, 1.0, &g, &ProfileOptions { n_nodes: 401, ..Default::default() }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.txt");
        p.write_table(&path).unwrap();
        let q = ContactProfile::read_table(&path).unwrap();
        assert_eq!(q.theta_nodes(), p.theta_nodes());
        assert_eq!(q.gas(), p.gas());
        assert_eq!(q.eval(0.3, 1.0), p.eval(0.3, 1.0));
    }
}
