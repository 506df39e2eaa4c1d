//! Test-only oracles, independent of the library's evaluation paths.

#![allow(dead_code)]

/// Adaptive Simpson with Richardson correction, relative tolerance.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
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
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫₀¹ t³ e^{ct} dt` from the antiderivative `e^{ct}(t³/c - 3t²/c² + 6t/c³ - 6/c⁴)`.
pub fn t3_exp_antiderivative(c: f64) -> f64 {
    let at = |t: f64| (c * t).exp() * (t.powi(3) / c - 3.0 * t * t / c.powi(2) + 6.0 * t / c.powi(3) - 6.0 / c.powi(4));
    at(1.0) - at(0.0)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}
