//! Composite midpoint sums with certified error bounds.
//!
//! The certified bound always refers to the corrected midpoint sum
//! `Σ h_i f(m_i) + h_i^3 f''(m_i) / 24`. Applied on each subinterval, the
//! single-interval bounds in [`crate::bounds`] cover exactly that quantity.
//! The same number is also reported for the plain midpoint sum, but there it
//! is only rigorous when `f''` vanishes at every midpoint, so it carries a
//! `heuristic` flag otherwise.

mod division;
mod reference;

pub use division::Division;
pub use reference::{integrate, integrate_with_budget, DEFAULT_BUDGET, MIN_TOLERANCE};

use std::fmt;

use rayon::prelude::*;

use crate::bounds::{self, BoundKind, DerivEndpoints, QGrid};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Jet3;
use reference::compensated_sum;

/// Largest subinterval count tried by [`certify`].
pub const N_MAX: usize = 1 << 20;

/// `|f''(m_i)| <= RIGOROUS_CURVATURE * scale` at every midpoint makes the plain
/// midpoint bound rigorous.
pub const RIGOROUS_CURVATURE: f64 = 1e-12;

/// Which single-interval bound is applied on each subinterval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Thm1,
    Thm2(f64),
    Thm3(f64),
    /// Smallest of the three per subinterval, with `q` chosen independently
    /// on each one.
    Best,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Thm1 => f.write_str("thm1"),
            Method::Thm2(q) => write!(f, "thm2(q={q})"),
            Method::Thm3(q) => write!(f, "thm3(q={q})"),
            Method::Best => f.write_str("best"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBound {
    pub a: f64,
    pub b: f64,
    /// Bound on `|∫_a^b f - h f(m) - h^3 f''(m) / 24|`.
    pub bound: f64,
    pub k1: f64,
    pub m1: f64,
    pub kind: BoundKind,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub method: Method,
    pub midpoint_sum: f64,
    pub corrected_sum: f64,
    /// Sum of the per-interval bounds; covers `corrected_sum`.
    pub certified_bound: f64,
    /// The same aggregate read as a bound on the plain midpoint sum.
    pub midpoint_bound: f64,
    /// False only when `f''` is negligible at every midpoint.
    pub midpoint_bound_heuristic: bool,
    pub per_interval: Vec<IntervalBound>,
}

impl QuadResult {
    pub fn n(&self) -> usize {
        self.per_interval.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOutcome {
    pub result: QuadResult,
    pub n_final: usize,
    pub iterations: usize,
}

impl CertifyOutcome {
    /// The certified value, i.e. the corrected midpoint sum.
    pub fn value(&self) -> f64 {
        self.result.corrected_sum
    }
}

fn midpoints(d: &Division) -> Vec<f64> {
    d.intervals().map(|(a, b)| 0.5 * (a + b)).collect()
}

fn jets_at(f: &Expr, xs: &[f64]) -> Result<Vec<Jet3>> {
    xs.par_iter().map(|&x| f.eval_jet3(x)).collect()
}

/// `M(f, d) = Σ f(m_i) h_i`.
pub fn midpoint_sum(f: &Expr, d: &Division) -> Result<f64> {
    let values: Vec<f64> = midpoints(d)
        .par_iter()
        .map(|&m| f.eval(m))
        .collect::<Result<_>>()?;
    Ok(compensated_sum(
        d.intervals().zip(values).map(|((a, b), v)| (b - a) * v),
    ))
}

/// `Σ h_i f(m_i) + h_i^3 f''(m_i) / 24`, exact for cubics.
pub fn corrected_midpoint_sum(f: &Expr, d: &Division) -> Result<f64> {
    let jets = jets_at(f, &midpoints(d))?;
    Ok(corrected_from_jets(d, &jets))
}

fn corrected_from_jets(d: &Division, mid_jets: &[Jet3]) -> f64 {
    compensated_sum(d.intervals().zip(mid_jets).map(|((a, b), j)| {
        let h = b - a;
        h * j.d0 + h * h * h * j.d2 / 24.0
    }))
}

fn local_bound(e: &DerivEndpoints, method: Method, grid: &QGrid) -> Result<(f64, BoundKind, Option<f64>)> {
    Ok(match method {
        Method::Thm1 => (bounds::bound_thm1(e)?, BoundKind::Chi1, None),
        Method::Thm2(q) => (bounds::bound_thm2(e, q)?, BoundKind::Chi2, Some(q)),
        Method::Thm3(q) => (bounds::bound_thm3(e, q)?, BoundKind::Chi3, Some(q)),
        Method::Best => {
            let r = bounds::best_bound(e, grid)?;
            (r.min_value, r.argmin, r.argmin_q())
        }
    })
}

/// Applies `method` on every subinterval of `d` and aggregates.
///
/// Per-interval work runs in parallel; results are summed in interval order.
pub fn composite_bound(f: &Expr, d: &Division, method: Method, grid: &QGrid) -> Result<QuadResult> {
    let point_jets = jets_at(f, d.points())?;
    let mid_jets = jets_at(f, &midpoints(d))?;

    let per_interval: Vec<IntervalBound> = d
        .points()
        .par_windows(2)
        .zip(point_jets.par_windows(2))
        .map(|(x, j)| {
            let e = DerivEndpoints::new(x[0], x[1], j[0].d3.abs(), j[1].d3.abs())?;
            let r = bounds::ratio_pair(&e)?;
            let (avg_bound, kind, q) = local_bound(&e, method, grid)?;
            Ok(IntervalBound {
                a: x[0],
                b: x[1],
                // The single-interval bounds are for the mean over the
                // interval; scale by h for the integral.
                bound: avg_bound * e.width(),
                k1: r.k,
                m1: r.m,
                kind,
                q,
            })
        })
        .collect::<Result<_>>()?;

    let midpoint_sum = compensated_sum(
        d.intervals()
            .zip(&mid_jets)
            .map(|((a, b), j)| (b - a) * j.d0),
    );
    let corrected_sum = corrected_from_jets(d, &mid_jets);
    let certified_bound = compensated_sum(per_interval.iter().map(|ib| ib.bound));

    let scale = mid_jets.iter().fold(1.0f64, |s, j| s.max(j.d0.abs()));
    let max_curvature = mid_jets.iter().fold(0.0f64, |s, j| s.max(j.d2.abs()));

    Ok(QuadResult {
        method,
        midpoint_sum,
        corrected_sum,
        certified_bound,
        midpoint_bound: certified_bound,
        midpoint_bound_heuristic: max_curvature > RIGOROUS_CURVATURE * scale,
        per_interval,
    })
}

/// High-accuracy integral of `f` over `[a, b]`, absolute tolerance `tol >= 1e-14`.
pub fn reference_integral(f: &Expr, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::domain(
            format!("reference tolerance must be >= {MIN_TOLERANCE:e}"),
            tol,
        ));
    }
    integrate(|x| f.eval(x), a, b, tol)
}

const LEMMA_TOL: f64 = 1e-13;

/// Residual of the identity expressing the corrected-midpoint defect on
/// `[a, b]` through two `t^3`-weighted integrals of `f'''`:
///
/// ```text
/// (1/(b-a)) ∫f - f(m) - (b-a)^2 f''(m) / 24
///   - (b-a)^3 / 96 [ ∫₀¹ t³ f'''(t a/2 + (2-t) b/2) dt - ∫₀¹ t³ f'''((2-t) a/2 + t b/2) dt ]
/// ```
///
/// Vanishes up to quadrature error for any thrice-differentiable `f`.
pub fn lemma_residual(f: &Expr, a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::BadInterval { a, b });
    }
    let w = b - a;
    let mid = f.eval_jet3(0.5 * (a + b))?;
    let mean = reference_integral(f, a, b, LEMMA_TOL)? / w;
    let lhs = mean - mid.d0 - w * w / 24.0 * mid.d2;

    let third = |x: f64| f.eval_jet3(x).map(|j| j.d3);
    let toward_a = integrate(
        |t| Ok(t * t * t * third(0.5 * t * a + 0.5 * (2.0 - t) * b)?),
        0.0,
        1.0,
        LEMMA_TOL,
    )?;
    let toward_b = integrate(
        |t| Ok(t * t * t * third(0.5 * (2.0 - t) * a + 0.5 * t * b)?),
        0.0,
        1.0,
        LEMMA_TOL,
    )?;
    let rhs = w * w * w / 96.0 * (toward_a - toward_b);
    Ok(lhs - rhs)
}

/// Relative rounding floor of the corrected sum; tolerances below it cannot
/// be certified meaningfully.
fn rounding_floor(d: &Division, r: &QuadResult, f: &Expr) -> Result<f64> {
    let jets = jets_at(f, &midpoints(d))?;
    let magnitude = compensated_sum(d.intervals().zip(&jets).map(|((a, b), j)| {
        let h = b - a;
        (h * j.d0).abs() + (h * h * h * j.d2 / 24.0).abs()
    }));
    Ok(8.0 * f64::EPSILON * magnitude.max(r.corrected_sum.abs()))
}

/// Doubles a uniform division from `n = 1` until the certified bound is at
/// most `tol`.
pub fn certify(f: &Expr, a: f64, b: f64, tol: f64, method: Method, grid: &QGrid) -> Result<CertifyOutcome> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive", tol));
    }
    let mut n = 1;
    let mut iterations = 0;
    let mut best: Option<(f64, usize)> = None;
    while n <= N_MAX {
        let d = Division::uniform(a, b, n)?;
        let result = composite_bound(f, &d, method, grid)?;
        iterations += 1;
        if result.certified_bound <= tol {
            return Ok(CertifyOutcome {
                result,
                n_final: n,
                iterations,
            });
        }
        if best.map_or(true, |(bb, _)| result.certified_bound < bb) {
            best = Some((result.certified_bound, n));
        }
        if tol < rounding_floor(&d, &result, f)? {
            break;
        }
        n *= 2;
    }
    let (best_bound, n) = best.expect("at least one iteration ran");
    Err(Error::ToleranceUnreachable { tol, best_bound, n })
}
