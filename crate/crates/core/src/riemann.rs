//! R1-C-R3 decomposition of a pair of far-field states.
//!
//! The left state is joined to `left_mid` by a 1-rarefaction, `left_mid` to
//! `right_mid` by a contact (equal pressure and velocity), and `right_mid` to
//! the right state by a 3-rarefaction. Along each rarefaction leg the
//! entropy is constant and the velocity follows the power-law antiderivative
//! of the characteristic speed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{entropy, pressure, GasParams, Sign, ThermoState};
use crate::numerics::{bisect, safeguarded_newton};

/// Default tolerance on the middle velocity mismatch.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Newton step budget for [`solve_wave_pattern`].
pub const STEP_BUDGET: usize = 200;

/// Rarefaction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    One,
    Three,
}

impl Family {
    pub fn sign(self) -> Sign {
        match self {
            Family::One => Sign::Minus,
            Family::Three => Sign::Plus,
        }
    }
}

/// Wave strengths of the three legs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Strengths {
    pub r1: f64,
    pub cd: f64,
    pub r3: f64,
}

impl Strengths {
    pub fn sum(&self) -> f64 {
        self.r1 + self.cd + self.r3
    }

    pub fn min(&self) -> f64 {
        self.r1.min(self.cd).min(self.r3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveDecomposition {
    pub left: ThermoState,
    pub right: ThermoState,
    pub left_mid: ThermoState,
    pub right_mid: ThermoState,
    pub p_mid: f64,
    pub strengths: Strengths,
    pub delta_min: f64,
}

impl WaveDecomposition {
    pub fn u_mid(&self) -> f64 {
        self.left_mid.u
    }

    /// True when both rarefaction legs have zero strength.
    pub fn is_contact_only(&self) -> bool {
        self.strengths.r1 == 0.0 && self.strengths.r3 == 0.0
    }
}

/// Result of the "small with the same order" test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SameOrder {
    Holds,
    Violated,
    /// At least one strength is exactly zero, so the ratio test is undefined.
    Degenerate,
}

impl SameOrder {
    pub fn holds(self) -> bool {
        self == SameOrder::Holds
    }
}

/// `sqrt(gamma p v^gamma)`: the isentrope constant in `lambda = K v^{-(gamma+1)/2}`.
#[inline]
pub(crate) fn isentrope_speed_constant(s: &ThermoState, g: &GasParams) -> f64 {
    (g.gamma() * g.r() * s.theta * s.v.powf(g.gamma() - 1.0)).sqrt()
}

/// Velocity on the family curve through `anchor` at volume `v`:
/// `u_anchor - int_{v_anchor}^{v} lambda(eta, s_anchor) d eta` in closed form.
#[inline]
pub(crate) fn curve_velocity(anchor: &ThermoState, v: f64, family: Family, g: &GasParams) -> f64 {
    let k = isentrope_speed_constant(anchor, g);
    let e = 0.5 * (g.gamma() - 1.0);
    let integral_abs = k / e * (anchor.v.powf(-e) - v.powf(-e));
    match family {
        // lambda_- < 0, so the subtracted integral is negative.
        Family::One => anchor.u + integral_abs,
        Family::Three => anchor.u - integral_abs,
    }
}

/// Point on the 1- or 3-rarefaction curve through `anchor` at `v_target`.
pub fn rarefaction_curve(anchor: &ThermoState, v_target: f64, family: Family, g: &GasParams) -> Result<ThermoState> {
    anchor.validate()?;
    if !(v_target >= anchor.v) {
        return Err(Error::InvalidCurveDirection {
            v_anchor: anchor.v,
            v_target,
        });
    }
    if v_target == anchor.v {
        return Ok(*anchor);
    }
    Ok(ThermoState {
        v: v_target,
        u: curve_velocity(anchor, v_target, family, g),
        theta: anchor.theta * (anchor.v / v_target).powf(g.gamma() - 1.0),
    })
}

/// Volume on the isentrope of `anchor` where the pressure equals `p`.
#[inline]
fn isentrope_volume(anchor: &ThermoState, p: f64, g: &GasParams) -> f64 {
    let pa = pressure(anchor, g);
    if p == pa {
        anchor.v
    } else {
        anchor.v * (pa / p).powf(1.0 / g.gamma())
    }
}

/// Finds the middle states of the R1-C-R3 pattern by a monotone root find on
/// the middle pressure.
pub fn solve_wave_pattern(left: &ThermoState, right: &ThermoState, g: &GasParams, tol: f64) -> Result<WaveDecomposition> {
    left.validate()?;
    right.validate()?;
    let gm1 = g.gamma() - 1.0;
    let z = gm1 / (2.0 * g.gamma());
    let p_l = pressure(left, g);
    let p_r = pressure(right, g);
    let c_l = (g.gamma() * p_l * left.v).sqrt();
    let c_r = (g.gamma() * p_r * right.v).sqrt();
    let p_hi = p_l.min(p_r);

    // Velocity gap u_right_mid(p) - u_left_mid(p), increasing in p.
    let gap = |p: f64| -> (f64, f64) {
        let u_l = left.u + 2.0 * c_l / gm1 * (1.0 - (p / p_l).powf(z));
        let u_r = right.u - 2.0 * c_r / gm1 * (1.0 - (p / p_r).powf(z));
        let du_l = -2.0 * c_l / gm1 * z * (p / p_l).powf(z) / p;
        let du_r = 2.0 * c_r / gm1 * z * (p / p_r).powf(z) / p;
        (u_r - u_l, du_r - du_l)
    };

    let (gap_hi, _) = gap(p_hi);
    let p_mid = if gap_hi.abs() <= tol {
        p_hi
    } else if gap_hi < 0.0 {
        return Err(Error::NotInR1CR3(format!(
            "velocity gap {gap_hi:e} at p = min(p-, p+) requires a compressive wave"
        )));
    } else {
        let gap_vacuum = right.u - left.u - 2.0 * (c_l + c_r) / gm1;
        if gap_vacuum >= 0.0 {
            return Err(Error::NotInR1CR3("rarefactions reach vacuum before the velocities meet".into()));
        }
        safeguarded_newton(gap, 0.0, p_hi, p_hi, 1e-15 * p_hi, tol, STEP_BUDGET, "riemann")?
    };

    let left_mid = rarefaction_curve(left, isentrope_volume(left, p_mid, g), Family::One, g)?;
    let right_mid = rarefaction_curve(right, isentrope_volume(right, p_mid, g), Family::Three, g)?;
    let u_mid = if left_mid.u == right_mid.u {
        left_mid.u
    } else {
        0.5 * (left_mid.u + right_mid.u)
    };
    let left_mid = ThermoState { u: u_mid, ..left_mid };
    let right_mid = ThermoState { u: u_mid, ..right_mid };
    let strengths = Strengths {
        r1: left_mid.l1_distance(left),
        cd: (right_mid.theta - left_mid.theta).abs(),
        r3: right_mid.l1_distance(right),
    };
    Ok(WaveDecomposition {
        left: *left,
        right: *right,
        left_mid,
        right_mid,
        p_mid,
        strengths,
        delta_min: strengths.min(),
    })
}

/// "Small with the same order": `r1 + cd + r3 <= C min(r1, cd, r3)`.
pub fn same_order_check(d: &WaveDecomposition, c: f64) -> SameOrder {
    let s = &d.strengths;
    if s.r1 == 0.0 || s.cd == 0.0 || s.r3 == 0.0 {
        SameOrder::Degenerate
    } else if s.sum() <= c * s.min() {
        SameOrder::Holds
    } else {
        SameOrder::Violated
    }
}

/// Builds a right state whose R1-C-R3 decomposition from `left` has the
/// requested strengths (contact raising the temperature). Used to set up
/// composite scenarios.
pub fn synthesize_right_state(left: &ThermoState, target: Strengths, g: &GasParams) -> Result<ThermoState> {
    left.validate()?;
    if target.r1 < 0.0 || target.cd < 0.0 || target.r3 < 0.0 {
        return Err(Error::InvalidState("target strengths must be nonnegative".into()));
    }
    // 1-leg: strength grows monotonically with the middle volume.
    let r1_strength = |v: f64| rarefaction_curve(left, v, Family::One, g).map(|s| s.l1_distance(left)).unwrap_or(f64::INFINITY);
    let mut v_hi = left.v * 2.0;
    while r1_strength(v_hi) < target.r1 {
        v_hi *= 2.0;
    }
    let v_lm = if target.r1 == 0.0 {
        left.v
    } else {
        bisect(|v| r1_strength(v) - target.r1, left.v, v_hi, 1e-15 * v_hi, 400)
    };
    let left_mid = rarefaction_curve(left, v_lm, Family::One, g)?;
    let p_mid = pressure(&left_mid, g);
    let theta_rm = left_mid.theta + target.cd;
    let right_mid = ThermoState::new(g.r() * theta_rm / p_mid, left_mid.u, theta_rm)?;

    // 3-leg, traversed backwards from the right middle state: walking to a
    // smaller volume moves along the same isentrope.
    let s_rm = entropy(&right_mid, g);
    let back = |v: f64| -> ThermoState {
        let theta = right_mid.theta * (right_mid.v / v).powf(g.gamma() - 1.0);
        let anchor = ThermoState { v, u: 0.0, theta };
        let k = isentrope_speed_constant(&anchor, g);
        let e = 0.5 * (g.gamma() - 1.0);
        let u = right_mid.u + k / e * (v.powf(-e) - right_mid.v.powf(-e));
        ThermoState { v, u, theta }
    };
    let r3_strength = |v: f64| back(v).l1_distance(&right_mid);
    let mut v_lo = right_mid.v * 0.5;
    while r3_strength(v_lo) < target.r3 {
        v_lo *= 0.5;
    }
    let v_r = if target.r3 == 0.0 {
        right_mid.v
    } else {
        // r3_strength decreases in v.
        bisect(|v| target.r3 - r3_strength(v), v_lo, right_mid.v, 1e-15 * right_mid.v, 400)
    };
    let right = back(v_r);
    debug_assert!((entropy(&right, g) - s_rm).abs() < 1e-9 * s_rm.abs().max(1.0));
    right.validate()?;
    Ok(right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{lambda_pm, theta_from_entropy};

    fn gas() -> GasParams {
        GasParams::monatomic(0.5)
    }

    #[test]
    fn curve_at_anchor_is_identity() {
        let g = gas();
        let a = ThermoState::new(1.3, 0.2, 0.7).unwrap();
        assert_eq!(rarefaction_curve(&a, a.v, Family::One, &g).unwrap(), a);
        assert_eq!(rarefaction_curve(&a, a.v, Family::Three, &g).unwrap(), a);
    }

    #[test]
    fn curve_direction_enforced() {
        let g = gas();
        let a = ThermoState::new(1.3, 0.2, 0.7).unwrap();
        assert!(matches!(
            rarefaction_curve(&a, 1.0, Family::One, &g),
            Err(Error::InvalidCurveDirection { .. })
        ));
    }

    #[test]
    fn curve_entropy_constant() {
        let g = gas();
        let a = ThermoState::new(0.8, -0.1, 1.2).unwrap();
        let s0 = entropy(&a, &g);
        for fam in [Family::One, Family::Three] {
            for i in 1..50 {
                let st = rarefaction_curve(&a, a.v * (1.0 + 0.05 * i as f64), fam, &g).unwrap();
                assert!((entropy(&st, &g) - s0).abs() < 1e-10);
            }
        }
    }

    /// Composite Simpson with recursive refinement as an independent oracle.
    fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
        fn rec<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, eps: f64, whole: f64, depth: u32) -> f64 {
            let c = 0.5 * (a + b);
            let l = (c - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + c)) + f(c));
            let r = (b - c) / 6.0 * (f(c) + 4.0 * f(0.5 * (c + b)) + f(b));
            if depth == 0 || (l + r - whole).abs() <= 15.0 * eps {
                l + r + (l + r - whole) / 15.0
            } else {
                rec(f, a, c, eps / 2.0, l, depth - 1) + rec(f, c, b, eps / 2.0, r, depth - 1)
            }
        }
        rec(f, a, b, eps, whole, depth)
    }

    #[test]
    fn closed_form_velocity_matches_quadrature() {
        let g = gas();
        let a = ThermoState::new(1.0, 0.3, 1.0).unwrap();
        let s = entropy(&a, &g);
        for (fam, sign) in [(Family::One, Sign::Minus), (Family::Three, Sign::Plus)] {
            let st = rarefaction_curve(&a, 2.0, fam, &g).unwrap();
            let integral = adaptive_simpson(|eta| lambda_pm(eta, s, sign, &g), 1.0, 2.0, 1e-14, 40);
            assert!((st.u - (a.u - integral)).abs() < 1e-9, "{fam:?}");
        }
    }

    #[test]
    fn identical_states_give_zero_strengths() {
        let g = gas();
        let s = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let d = solve_wave_pattern(&s, &s, &g, DEFAULT_TOL).unwrap();
        assert_eq!(d.strengths, Strengths::default());
        assert_eq!(d.left_mid, s);
        assert_eq!(d.right_mid, s);
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Degenerate);
    }

    #[test]
    fn contact_only_pattern() {
        let g = gas();
        let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let right = ThermoState::new(0.5, 0.0, 0.5).unwrap();
        let d = solve_wave_pattern(&left, &right, &g, DEFAULT_TOL).unwrap();
        assert_eq!(d.strengths.r1, 0.0);
        assert_eq!(d.strengths.r3, 0.0);
        assert_eq!(d.left_mid, left);
        assert_eq!(d.right_mid, right);
        assert!((d.strengths.cd - 0.5).abs() < 1e-15);
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Degenerate);
    }

    #[test]
    fn compressive_pair_rejected() {
        let g = gas();
        let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let right = ThermoState::new(2.0, 0.0, 0.5).unwrap();
        assert!(matches!(solve_wave_pattern(&left, &right, &g, DEFAULT_TOL), Err(Error::NotInR1CR3(_))));
        let colliding = ThermoState::new(1.0, -0.2, 1.0).unwrap();
        assert!(matches!(solve_wave_pattern(&left, &colliding, &g, DEFAULT_TOL), Err(Error::NotInR1CR3(_))));
        let vacuum = ThermoState::new(1.0, 20.0, 1.0).unwrap();
        assert!(matches!(solve_wave_pattern(&left, &vacuum, &g, DEFAULT_TOL), Err(Error::NotInR1CR3(_))));
    }

    /// Oracle: bisection on the middle pressure with the volume recovered
    /// through the entropy-form equation of state and the velocity from the
    /// power-law integral of `lambda_pm`.
    fn bisection_oracle(left: &ThermoState, right: &ThermoState, g: &GasParams) -> (f64, ThermoState, ThermoState) {
        let s_l = entropy(left, g);
        let s_r = entropy(right, g);
        let vol = |p: f64, s: f64| (g.a() * ((g.gamma() - 1.0) * s / g.r()).exp() / p).powf(1.0 / g.gamma());
        let q = 0.5 * (g.gamma() - 1.0);
        let speed_int = |v0: f64, v1: f64, s: f64, sign: Sign| {
            // int lambda = lambda(v) * v^{(gamma+1)/2} * [v^{-q}]/(-q)
            let k = lambda_pm(1.0, s, sign, g);
            k * (v1.powf(-q) - v0.powf(-q)) / (-q)
        };
        let u_left = |p: f64| left.u - speed_int(left.v, vol(p, s_l), s_l, Sign::Minus);
        let u_right = |p: f64| right.u - speed_int(right.v, vol(p, s_r), s_r, Sign::Plus);
        let p_hi = pressure(left, g).min(pressure(right, g));
        let p = bisect(|p| u_right(p) - u_left(p), 1e-9, p_hi, 1e-12, 400);
        let vl = vol(p, s_l);
        let vr = vol(p, s_r);
        let lm = ThermoState { v: vl, u: u_left(p), theta: theta_from_entropy(vl, s_l, g) };
        let rm = ThermoState { v: vr, u: u_right(p), theta: theta_from_entropy(vr, s_r, g) };
        (p, lm, rm)
    }

    #[test]
    fn generic_pattern_matches_bisection_oracle() {
        let g = GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0, 1.0, 0.0, 0.5).unwrap();
        let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        for right in [
            ThermoState::new(1.05, 0.08, 1.02).unwrap(),
            ThermoState::new(0.9, 0.05, 0.95).unwrap(),
            ThermoState::new(1.2, 0.2, 1.1).unwrap(),
        ] {
            let d = solve_wave_pattern(&left, &right, &g, DEFAULT_TOL).unwrap();
            let (p, lm, rm) = bisection_oracle(&left, &right, &g);
            assert!((d.p_mid - p).abs() < 1e-8);
            for (a, b) in [(d.left_mid, lm), (d.right_mid, rm)] {
                assert!((a.v - b.v).abs() < 1e-8, "{a:?} vs {b:?}");
                assert!((a.u - b.u).abs() < 1e-8, "{a:?} vs {b:?}");
                assert!((a.theta - b.theta).abs() < 1e-8, "{a:?} vs {b:?}");
            }
            assert!((pressure(&d.left_mid, &g) - d.p_mid).abs() < 1e-12);
            assert!((pressure(&d.right_mid, &g) - d.p_mid).abs() < 1e-12);
            assert_eq!(d.left_mid.u, d.right_mid.u);
            assert!((entropy(&d.left_mid, &g) - entropy(&left, &g)).abs() < 1e-10);
            assert!((entropy(&d.right_mid, &g) - entropy(&right, &g)).abs() < 1e-10);
        }
    }

    #[test]
    fn synthesized_states_roundtrip() {
        let g = gas();
        let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let target = Strengths { r1: 0.05, cd: 0.05, r3: 0.05 };
        let right = synthesize_right_state(&left, target, &g).unwrap();
        let d = solve_wave_pattern(&left, &right, &g, 1e-13).unwrap();
        assert!((d.strengths.r1 - 0.05).abs() < 1e-9);
        assert!((d.strengths.cd - 0.05).abs() < 1e-9);
        assert!((d.strengths.r3 - 0.05).abs() < 1e-9);
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Holds);
    }

    #[test]
    fn same_order_golden() {
        let g = gas();
        let s = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let mut d = solve_wave_pattern(&s, &s, &g, DEFAULT_TOL).unwrap();
        d.strengths = Strengths { r1: 0.1, cd: 0.1, r3: 0.1 };
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Holds);
        d.strengths = Strengths { r1: 1.0, cd: 0.001, r3: 1.0 };
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Violated);
        d.strengths = Strengths { r1: 0.0, cd: 0.2, r3: 0.0 };
        assert_eq!(same_order_check(&d, 10.0), SameOrder::Degenerate);
    }

    #[test]
    fn strengths_shrink_monotonically_toward_left() {
        let g = gas();
        let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
        let far = synthesize_right_state(&left, Strengths { r1: 0.1, cd: 0.1, r3: 0.1 }, &g).unwrap();
        let mut prev = Strengths { r1: f64::INFINITY, cd: f64::INFINITY, r3: f64::INFINITY };
        for k in (1..=10).rev() {
            let s = k as f64 / 10.0;
            let right = ThermoState {
                v: left.v + s * (far.v - left.v),
                u: left.u + s * (far.u - left.u),
                theta: left.theta + s * (far.theta - left.theta),
            };
            let d = solve_wave_pattern(&left, &right, &g, 1e-13).unwrap();
            assert!(d.strengths.r1 < prev.r1 && d.strengths.cd < prev.cd && d.strengths.r3 < prev.r3);
            prev = d.strengths;
        }
    }
}
