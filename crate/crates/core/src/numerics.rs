//! Small numerical kernels shared by the modules: quadrature, differencing,
//! a tridiagonal solver, safeguarded scalar root finding and slope fits.

use crate::error::{Error, Result};

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Trapezoid rule on a nonuniform abscissa.
pub fn trapezoid_xy(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Second-order derivative of uniformly spaced samples: central in the
/// interior, one-sided second order at the ends.
pub fn gradient(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        let d = (values[1] - values[0]) / dx;
        return vec![d, d];
    }
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * dx);
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dx);
    out
}

/// Solves a tridiagonal system in place (Thomas algorithm).
///
/// `lower[0]` and `upper[n-1]` are ignored. Returns `None` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return None;
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Cubic Hermite interpolation on one interval of width `h`, returning the
/// value and first derivative at local coordinate `s in [0, 1]`.
#[inline]
pub fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, h: f64, s: f64) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    let deriv = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
    (value, deriv)
}

/// Newton iteration on `f` with bisection fallback, for an increasing
/// function with `f(lo) <= 0 <= f(hi)`. `f` returns `(value, derivative)`.
/// Converges when `|f| <= ftol` or the bracket shrinks below `xtol`.
#[allow(clippy::too_many_arguments)]
pub fn safeguarded_newton<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
    context: &'static str,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut x = x0.clamp(lo, hi);
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        last = fx.abs();
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= xtol {
            return Ok(0.5 * (lo + hi));
        }
        let newton = if dfx > 0.0 && dfx.is_finite() { x - fx / dfx } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        context,
        iterations: max_iter,
        residual: last,
    })
}

/// Plain bisection for an increasing function with `f(lo) <= 0 <= f(hi)`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, width: f64, max_iter: usize) -> f64 {
    for _ in 0..max_iter {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_exact_for_linear() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&ys, 0.1) - 2.5).abs() < 1e-13);
        assert!((trapezoid_xy(&xs, &ys) - 2.5).abs() < 1e-13);
    }

    #[test]
    fn gradient_exact_for_quadratic() {
        let dx = 0.25;
        let ys: Vec<f64> = (0..9).map(|i| (i as f64 * dx).powi(2)).collect();
        let g = gradient(&ys, dx);
        for (i, gi) in g.iter().enumerate() {
            assert!((gi - 2.0 * i as f64 * dx).abs() < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let lower = [0.0, 1.0, 2.0, -1.0];
        let diag = [4.0, 5.0, 6.0, 7.0];
        let upper = [1.0, -2.0, 0.5, 0.0];
        let x_true = [1.0, -2.0, 3.0, 0.5];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut r = diag[i] * x_true[i];
                if i > 0 {
                    r += lower[i] * x_true[i - 1];
                }
                if i < 3 {
                    r += upper[i] * x_true[i + 1];
                }
                r
            })
            .collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
        for i in 0..4 {
            assert!((x[i] - x_true[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_reproduces_cubic() {
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let (a, b) = (0.5, 1.25);
        let h = b - a;
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let x = a + s * h;
            let (v, d) = hermite(f(a), f(b), df(a), df(b), h, s);
            assert!((v - f(x)).abs() < 1e-13 && (d - df(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn newton_finds_cube_root() {
        let r = safeguarded_newton(|x| (x * x * x - 2.0, 3.0 * x * x), 0.0, 2.0, 0.0, 1e-15, 1e-15, 100, "test").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
        let b = bisect(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 200);
        assert!((b - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let t: Vec<f64> = vec![1.0, 10.0, 100.0];
        let y: Vec<f64> = t.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        assert!((log_log_slope(&t, &y) + 1.5).abs() < 1e-12);
    }
}
