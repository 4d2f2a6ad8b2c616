//! Static spherically symmetric Born-Infeld profile
//! `f(r) = √(Ab) ∫₀^r du / √(A + u⁴)`.

use crate::error::{Error, Result};
use crate::math;

pub const QUADRATURE_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || math::abs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

pub fn radial_profile(a: f64, b: f64, r: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("profile needs A > 0, b > 0, r ≥ 0"));
    }
    let c = math::sqrt(a * b);
    Ok(integrate(|u| c / math::sqrt(a + u * u * u * u), 0.0, r, QUADRATURE_TOL))
}

/// `f'(0)` from Richardson extrapolation of `f(h)/h` at `h` and `h/2`;
/// the error of `f(h)/h` is `O(h⁴)`.
pub fn origin_slope(a: f64, b: f64, h: f64) -> Result<f64> {
    let d1 = radial_profile(a, b, h)? / h;
    let d2 = radial_profile(a, b, 0.5 * h)? / (0.5 * h);
    Ok((16.0 * d2 - d1) / 15.0)
}
