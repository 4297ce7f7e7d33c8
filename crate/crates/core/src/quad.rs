//! Adaptive quadrature, one- and two-dimensional.

use crate::error::Error;
use crate::Result;

const MAX_DEPTH: u32 = 60;

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    m: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let (left, lm, flm) = simpson(f, a, fa, m, fm);
    let (right, rm, frm) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-15 {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureNonConvergence(format!(
            "max depth on [{a}, {b}], residual {delta:e}"
        )));
    }
    Ok(adapt(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth + 1)?
        + adapt(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth + 1)?)
}

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(&f, a, fa, b, fb);
    // seed with two panels so symmetric integrands do not fool the estimate
    let (left, lm, flm) = simpson(&f, a, fa, m, fm);
    let (right, rm, frm) = simpson(&f, m, fm, b, fb);
    let _ = whole;
    Ok(
        adapt(&f, a, fa, m, fm, left, lm, flm, 0.5 * tol, 0)?
            + adapt(&f, m, fm, b, fb, right, rm, frm, 0.5 * tol, 0)?,
    )
}

fn simpson2d<F: Fn(f64, f64) -> f64>(f: &F, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let xs = [x0, 0.5 * (x0 + x1), x1];
    let ys = [y0, 0.5 * (y0 + y1), y1];
    let w = [1.0, 4.0, 1.0];
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            acc += w[i] * w[j] * f(x, y);
        }
    }
    acc * (x1 - x0) * (y1 - y0) / 36.0
}

fn adapt2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let q = [
        simpson2d(f, x0, xm, y0, ym),
        simpson2d(f, xm, x1, y0, ym),
        simpson2d(f, x0, xm, ym, y1),
        simpson2d(f, xm, x1, ym, y1),
    ];
    let refined: f64 = q.iter().sum();
    let delta = refined - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(refined + delta / 15.0);
    }
    if depth >= 30 {
        return Err(Error::QuadratureNonConvergence(format!(
            "2d max depth on [{x0},{x1}]x[{y0},{y1}]"
        )));
    }
    let quarters = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)];
    let mut acc = 0.0;
    for ((a, b, c, d), w) in quarters.into_iter().zip(q) {
        acc += adapt2d(f, a, b, c, d, w, 0.25 * tol, depth + 1)?;
    }
    Ok(acc)
}

/// Adaptive 2D quadrature over a rectangle to absolute tolerance `tol`.
pub fn integrate2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    tol: f64,
) -> Result<f64> {
    if x0 == x1 || y0 == y1 {
        return Ok(0.0);
    }
    let whole = simpson2d(&f, x0, x1, y0, y1);
    adapt2d(&f, x0, x1, y0, y1, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory() {
        let v = integrate(|x| x.sin(), 0.0, PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_tail() {
        let v = integrate(|x| (-x * x).exp(), -8.0, 8.0, 1e-13).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn two_dimensional_product() {
        let v = integrate2d(|x, y| x * y * y, 0.0, 1.0, 0.0, 3.0, 1e-11).unwrap();
        assert!((v - 4.5).abs() < 1e-9);
    }
}
