//! Ground-truth integrator used to check every inequality.
//!
//! Each panel is integrated with the 15-point Kronrod rule; a panel's error
//! is estimated by comparing its single-panel value with the sum over its two
//! halves, and the halves are accepted once that difference falls below the
//! panel's share of the tolerance. Panels are processed depth first and the
//! accepted contributions are summed in a fixed order with compensation, so
//! results are bit-reproducible.

use crate::error::{Error, Result};

/// Evaluation budget before [`Error::NonConvergence`].
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Smallest tolerance accepted by [`reference_integral`](super::reference_integral).
pub const MIN_TOLERANCE: f64 = 1e-14;

// Kronrod abscissae on [-1, 1] (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = WGK[7] * f(c)?;
    for j in 0..7 {
        let dx = h * XGK[j];
        sum += WGK[j] * (f(c - dx)? + f(c + dx)?);
    }
    Ok(sum * h)
}

/// Neumaier-compensated sum in iteration order.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_budget(f, a, b, tol, DEFAULT_BUDGET)
}

pub fn integrate_with_budget<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::BadInterval { a, b });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain("integration tolerance must be positive", tol));
    }
    let width = b - a;
    let mut evaluations = 15;
    let mut stack = vec![(a, b, kronrod15(&mut f, a, b)?)];
    let mut accepted = Vec::new();
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) || evaluations + 30 > budget {
            let partial = compensated_sum(accepted.iter().copied()) + whole;
            return Err(Error::NonConvergence {
                evaluations,
                estimate: partial,
            });
        }
        let left = kronrod15(&mut f, lo, mid)?;
        let right = kronrod15(&mut f, mid, hi)?;
        evaluations += 30;
        let halves = left + right;
        let local_tol = tol * (hi - lo) / width;
        if (whole - halves).abs() <= local_tol {
            accepted.push(halves);
        } else {
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    Ok(compensated_sum(accepted))
}
