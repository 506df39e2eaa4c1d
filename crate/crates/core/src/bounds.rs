//! Single-interval error bounds for the corrected midpoint rule when `|f'''|`
//! (or a power of it) is log-convex.
//!
//! Every bound is built from the moment `mu(K) = ∫₀¹ t³ K^{t/2} dt` and the
//! Hölder mean `∫₀¹ K^{qt/2} dt`, where `K = |f'''(a)| / |f'''(b)|`. All
//! evaluations work with `L = ln K` directly: the closed form is used for
//! `|L| > L_SWITCH` and a power series near `L = 0`, where the closed form
//! cancels catastrophically.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Below this `|ln K|` the moment is evaluated by its power series.
pub const L_SWITCH: f64 = 0.5;

/// Largest admissible exponent `q·ln K / 2`.
pub const MAX_EXPONENT: f64 = 700.0;

const GOLDEN_ITERATIONS: usize = 20;

/// Interval endpoints together with `|f'''|` at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivEndpoints {
    pub a: f64,
    pub b: f64,
    pub f3a_abs: f64,
    pub f3b_abs: f64,
}

impl DerivEndpoints {
    pub fn new(a: f64, b: f64, f3a_abs: f64, f3b_abs: f64) -> Result<Self> {
        let e = DerivEndpoints {
            a,
            b,
            f3a_abs,
            f3b_abs,
        };
        e.check_interval()?;
        e.check_magnitudes()?;
        Ok(e)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// Same interval with the endpoint magnitudes exchanged.
    pub fn swapped(&self) -> Self {
        DerivEndpoints {
            f3a_abs: self.f3b_abs,
            f3b_abs: self.f3a_abs,
            ..*self
        }
    }

    fn check_interval(&self) -> Result<()> {
        if self.a.is_finite() && self.b.is_finite() && self.a < self.b {
            Ok(())
        } else {
            Err(Error::BadInterval {
                a: self.a,
                b: self.b,
            })
        }
    }

    fn check_magnitudes(&self) -> Result<()> {
        for (x, v) in [(self.a, self.f3a_abs), (self.b, self.f3b_abs)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositiveThirdDerivative { x, value: v });
            }
        }
        Ok(())
    }

    /// `(b - a)^3 / 96`, the common prefactor of all three bounds.
    fn prefactor(&self) -> f64 {
        self.width().powi(3) / 96.0
    }
}

/// `K = |f'''(a)| / |f'''(b)|` and `M = 1 / K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPair {
    pub k: f64,
    pub m: f64,
    /// `ln K`, computed as `ln|f'''(a)| - ln|f'''(b)|` so that swapping the
    /// endpoints negates it exactly.
    pub ln_k: f64,
}

pub fn ratio_pair(e: &DerivEndpoints) -> Result<RatioPair> {
    e.check_magnitudes()?;
    let k = e.f3a_abs / e.f3b_abs;
    Ok(RatioPair {
        k,
        m: 1.0 / k,
        ln_k: e.f3a_abs.ln() - e.f3b_abs.ln(),
    })
}

/// Hölder exponent `q` and its conjugate `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub q: f64,
    /// `q / (q - 1)`; absent at `q = 1`.
    pub p: Option<f64>,
}

impl BoundParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::domain("q must be a finite number >= 1", q));
        }
        let p = (q > 1.0).then(|| q / (q - 1.0));
        Ok(BoundParams { q, p })
    }
}

/// Closed form of `∫₀¹ t³ e^{Lt/2} dt`.
pub fn moment_closed_form(l: f64) -> f64 {
    let s = (0.5 * l).exp();
    let l2 = l * l;
    let l4 = l2 * l2;
    s * (2.0 * (l - 6.0) / l2 + 48.0 * (l - 2.0) / l4) + 96.0 / l4
}

/// Power series `Σ (L/2)^n / (n! (n + 4))` of the same moment.
pub fn moment_series(l: f64) -> f64 {
    let c = 0.5 * l;
    let mut power = 1.0; // c^n / n!
    let mut sum = 0.25;
    for n in 1..64 {
        power *= c / n as f64;
        let term = power / (n + 4) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn check_exponent(l: f64) -> Result<()> {
    if l.is_nan() {
        return Err(Error::domain("moment exponent is NaN", l));
    }
    if 0.5 * l > MAX_EXPONENT {
        return Err(Error::Overflow { exponent: 0.5 * l });
    }
    Ok(())
}

/// `∫₀¹ t³ e^{Lt/2} dt` with the series/closed-form switch at [`L_SWITCH`].
pub fn moment(l: f64) -> Result<f64> {
    check_exponent(l)?;
    if l.abs() <= L_SWITCH {
        Ok(moment_series(l))
    } else {
        Ok(moment_closed_form(l))
    }
}

fn check_ratio(k: f64) -> Result<f64> {
    if k.is_finite() && k > 0.0 {
        Ok(k.ln())
    } else {
        Err(Error::domain("ratio K must be positive and finite", k))
    }
}

fn check_q(q: f64, min: f64, strict: bool) -> Result<()> {
    let ok = q.is_finite() && if strict { q > min } else { q >= min };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(
            format!("q must be {} {min}", if strict { ">" } else { ">=" }),
            q,
        ))
    }
}

/// `μ_K = ∫₀¹ t³ K^{t/2} dt`.
pub fn mu(k: f64) -> Result<f64> {
    moment(check_ratio(k)?)
}

/// `μ_{K,q} = ∫₀¹ t³ K^{qt/2} dt`, i.e. `mu(K^q)` without forming `K^q`.
pub fn mu_q(k: f64, q: f64) -> Result<f64> {
    check_q(q, 1.0, false)?;
    moment(q * check_ratio(k)?)
}

/// `(e^u - 1) / u`, equal to 1 at `u = 0`.
fn expm1_over(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.exp_m1() / u
    }
}

fn holder_from_log(q: f64, ln_k: f64) -> Result<f64> {
    let u = 0.5 * q * ln_k;
    if u > MAX_EXPONENT {
        return Err(Error::Overflow { exponent: u });
    }
    Ok(expm1_over(u))
}

/// `(2 / (q ln K)) (K^{q/2} - 1) = ∫₀¹ K^{qt/2} dt`.
///
/// `q = 1` is accepted so the factor can be checked on its own; the Hölder
/// bound itself requires `q > 1`.
pub fn holder_factor(k: f64, q: f64) -> Result<f64> {
    check_q(q, 1.0, false)?;
    holder_from_log(q, check_ratio(k)?)
}

/// The direct bound: `((b-a)^3 / 96) (|f'''(b)| μ_K + |f'''(a)| μ_M)`.
pub fn bound_thm1(e: &DerivEndpoints) -> Result<f64> {
    e.check_interval()?;
    let r = ratio_pair(e)?;
    let sum = e.f3b_abs * moment(r.ln_k)? + e.f3a_abs * moment(-r.ln_k)?;
    Ok(e.prefactor() * sum)
}

/// The Hölder bound for `q > 1`.
pub fn bound_thm2(e: &DerivEndpoints, q: f64) -> Result<f64> {
    check_q(q, 1.0, true)?;
    e.check_interval()?;
    let r = ratio_pair(e)?;
    let p = q / (q - 1.0);
    // (1 / (3p + 1))^{1/p}
    let t3p = (-(3.0 * p + 1.0).ln() / p).exp();
    let hk = holder_from_log(q, r.ln_k)?.powf(1.0 / q);
    let hm = holder_from_log(q, -r.ln_k)?.powf(1.0 / q);
    Ok(e.prefactor() * t3p * (e.f3b_abs * hk + e.f3a_abs * hm))
}

/// The power-mean bound for `q >= 1`; at `q = 1` it coincides with [`bound_thm1`].
pub fn bound_thm3(e: &DerivEndpoints, q: f64) -> Result<f64> {
    check_q(q, 1.0, false)?;
    e.check_interval()?;
    let r = ratio_pair(e)?;
    let quarter = 0.25f64.powf(1.0 - 1.0 / q);
    let mk = moment(q * r.ln_k)?.powf(1.0 / q);
    let mm = moment(-q * r.ln_k)?.powf(1.0 / q);
    Ok(e.prefactor() * quarter * (e.f3b_abs * mk + e.f3a_abs * mm))
}

/// Sorted, de-duplicated list of candidate exponents `q >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    points: Vec<f64>,
}

impl QGrid {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("q grid is empty", f64::NAN));
        }
        for &q in &points {
            check_q(q, 1.0, false)?;
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(QGrid { points })
    }

    /// `count` points from `lo` to `hi` (inclusive), evenly spaced in `ln q`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::spaced(lo, hi, count, true)
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::spaced(lo, hi, count, false)
    }

    fn spaced(lo: f64, hi: f64, count: usize, log: bool) -> Result<Self> {
        if count == 0 || !(lo <= hi) {
            return Err(Error::domain("q grid needs count >= 1 and lo <= hi", lo));
        }
        if count == 1 {
            return Self::new(vec![lo]);
        }
        let (l0, l1) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
        let step = (l1 - l0) / (count - 1) as f64;
        let points = (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else if i == 0 {
                    lo
                } else {
                    let v = l0 + step * i as f64;
                    if log {
                        v.exp()
                    } else {
                        v
                    }
                }
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl Default for QGrid {
    /// 64 log-spaced points on `[1.001, 64]`.
    fn default() -> Self {
        QGrid::log_spaced(1.001, 64.0, 64).expect("default grid is valid")
    }
}

/// Parses `lo:hi:count(log)` or `lo:hi:count(lin)`; a bare count means log.
impl FromStr for QGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("invalid q grid `{s}`, expected lo:hi:count(log|lin)");
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [lo, hi, rest] = parts.as_slice() else {
            return Err(bad());
        };
        let (count, log) = if let Some(c) = rest.strip_suffix("(log)") {
            (c, true)
        } else if let Some(c) = rest.strip_suffix("(lin)") {
            (c, false)
        } else {
            (*rest, true)
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        QGrid::spaced(lo, hi, count, log).map_err(|e| format!("{}: {e}", bad()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Chi1,
    Chi2,
    Chi3,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Chi1 => "chi1",
            BoundKind::Chi2 => "chi2",
            BoundKind::Chi3 => "chi3",
        })
    }
}

/// The three competing bounds on one interval and the smallest of them.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub ratios: RatioPair,
    pub chi1: f64,
    /// `+inf` when no admissible `q > 1` was available.
    pub chi2: f64,
    pub q2: Option<f64>,
    pub chi3: f64,
    pub q3: Option<f64>,
    pub min_value: f64,
    pub argmin: BoundKind,
}

impl BoundReport {
    /// The exponent that produced `min_value`, if any.
    pub fn argmin_q(&self) -> Option<f64> {
        match self.argmin {
            BoundKind::Chi1 => None,
            BoundKind::Chi2 => self.q2,
            BoundKind::Chi3 => self.q3,
        }
    }
}

/// Minimizes `objective` over the grid points, then refines with a
/// golden-section search on the bracket around the best grid point.
/// Overflowing exponents count as unavailable.
fn minimize_over_grid<F>(grid: &[f64], objective: F) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let eval = |q: f64| match objective(q) {
        Ok(v) => Ok(v),
        Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    };
    let mut best: Option<(f64, f64, usize)> = None;
    for (i, &q) in grid.iter().enumerate() {
        let v = eval(q)?;
        if v.is_finite() && best.map_or(true, |(bv, _, _)| v < bv) {
            best = Some((v, q, i));
        }
    }
    let Some((mut best_v, mut best_q, i)) = best else {
        return Ok(None);
    };
    if grid.len() >= 2 {
        let mut lo = grid[i.saturating_sub(1)];
        let mut hi = grid[(i + 1).min(grid.len() - 1)];
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut f1 = eval(x1)?;
        let mut f2 = eval(x2)?;
        for _ in 0..GOLDEN_ITERATIONS {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = eval(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = eval(x2)?;
            }
        }
        for (q, v) in [(x1, f1), (x2, f2)] {
            if v < best_v {
                best_v = v;
                best_q = q;
            }
        }
    }
    Ok(Some((best_v, best_q)))
}

/// `min{χ1, χ2, χ3}` with χ2 and χ3 minimized over `grid`. Grid entries
/// equal to 1 are skipped for χ2. Ties go to χ1, then χ2.
pub fn best_bound(e: &DerivEndpoints, grid: &QGrid) -> Result<BoundReport> {
    let ratios = ratio_pair(e)?;
    let chi1 = bound_thm1(e)?;

    let holder_grid: Vec<f64> = grid.points().iter().copied().filter(|&q| q > 1.0).collect();
    let (chi2, q2) = match minimize_over_grid(&holder_grid, |q| bound_thm2(e, q))? {
        Some((v, q)) => (v, Some(q)),
        None => (f64::INFINITY, None),
    };
    let (chi3, q3) = match minimize_over_grid(grid.points(), |q| bound_thm3(e, q))? {
        Some((v, q)) => (v, Some(q)),
        None => (f64::INFINITY, None),
    };

    let mut min_value = chi1;
    let mut argmin = BoundKind::Chi1;
    if chi2 < min_value {
        min_value = chi2;
        argmin = BoundKind::Chi2;
    }
    if chi3 < min_value {
        min_value = chi3;
        argmin = BoundKind::Chi3;
    }
    Ok(BoundReport {
        ratios,
        chi1,
        chi2,
        q2,
        chi3,
        q3,
        min_value,
        argmin,
    })
}
