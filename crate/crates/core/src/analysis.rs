//! Sampled checks of the hypotheses behind the bounds, and a catalog of
//! admissible integrands.
//!
//! Sampling can certify a violation but only give evidence of compliance,
//! so reports describe a pass as evidence.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::quadrature::reference_integral;

pub const DEFAULT_GRID_N: usize = 257;

/// Multiplicative slack in `g(m)^2 <= g(x) g(y) (1 + LOG_CONVEXITY_TOL)`.
pub const LOG_CONVEXITY_TOL: f64 = 1e-9;

/// Lower bound `f'' >= -CONVEXITY_TOL * scale` accepted as convex.
pub const CONVEXITY_TOL: f64 = 1e-12;

const HERMITE_HADAMARD_TOL: f64 = 1e-12;

/// `|f'''|` sampled on a uniform grid over `[a, b]`.
///
/// The grid is uniform so that every symmetric pair `(x_{i-j}, x_{i+j})` has
/// its midpoint `x_i` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub xs: Vec<f64>,
    pub gs: Vec<f64>,
}

impl GridSamples {
    pub fn third_derivative(f: &Expr, a: f64, b: f64, grid_n: usize) -> Result<Self> {
        let xs = uniform_grid(a, b, grid_n)?;
        let gs = xs
            .par_iter()
            .map(|&x| f.eval_jet3(x).map(|j| j.d3.abs()))
            .collect::<Result<_>>()?;
        Ok(GridSamples { xs, gs })
    }
}

fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::BadInterval { a, b });
    }
    if n < 3 {
        return Err(Error::domain("grid needs at least 3 points", n as f64));
    }
    let h = (b - a) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n - 1).map(|i| a + h * i as f64).collect();
    xs.push(b);
    Ok(xs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub passed: bool,
    /// `max g(m)^2 / (g(x) g(y)) - 1` over the tested pairs; `+inf` when a
    /// sample vanishes.
    pub worst_violation: f64,
    /// The pair `(x, y)` attaining `worst_violation`.
    pub witness: (f64, f64),
    /// Exponent the check was run for.
    pub q: f64,
    pub pairs_tested: usize,
}

/// Log-space midpoint defect `2 ln g(m) - ln g(x) - ln g(y)`, maximized.
fn worst_midpoint_defect(s: &GridSamples) -> (f64, (f64, f64), usize) {
    let n = s.xs.len();
    if let Some(i) = s.gs.iter().position(|&g| !(g > 0.0)) {
        return (f64::INFINITY, (s.xs[i], s.xs[i]), 0);
    }
    let logs: Vec<f64> = s.gs.iter().map(|g| g.ln()).collect();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (s.xs[0], s.xs[n - 1]);
    let mut pairs = 0;
    for i in 1..n - 1 {
        for j in 1..=i.min(n - 1 - i) {
            let d = 2.0 * logs[i] - logs[i - j] - logs[i + j];
            pairs += 1;
            if d > worst {
                worst = d;
                witness = (s.xs[i - j], s.xs[i + j]);
            }
        }
    }
    (worst, witness, pairs)
}

fn report(s: &GridSamples, q: f64) -> ConvexityReport {
    let (defect, witness, pairs_tested) = worst_midpoint_defect(s);
    // The verdict is decided on the q = 1 defect so it cannot depend on q:
    // log(g^q) = q log g.
    let passed = defect <= LOG_CONVEXITY_TOL.ln_1p();
    ConvexityReport {
        passed,
        worst_violation: (q * defect).exp_m1(),
        witness,
        q,
        pairs_tested,
    }
}

/// Midpoint log-convexity of `|f'''|` on `grid_n` uniform samples.
pub fn check_log_convexity(f: &Expr, a: f64, b: f64, grid_n: usize) -> Result<ConvexityReport> {
    Ok(report(&GridSamples::third_derivative(f, a, b, grid_n)?, 1.0))
}

/// Same criterion on `|f'''|^q`; the verdict equals [`check_log_convexity`].
pub fn check_log_convexity_pow(f: &Expr, a: f64, b: f64, q: f64, grid_n: usize) -> Result<ConvexityReport> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::domain("q must be a finite number >= 1", q));
    }
    Ok(report(&GridSamples::third_derivative(f, a, b, grid_n)?, q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteHadamardReport {
    /// `f((a + b) / 2)`
    pub left: f64,
    /// `(1 / (b - a)) ∫_a^b f`
    pub mean: f64,
    /// `(f(a) + f(b)) / 2`
    pub right: f64,
    pub left_slack: f64,
    pub right_slack: f64,
    pub holds: bool,
}

/// Checks `f(m) <= mean(f) <= (f(a) + f(b)) / 2` after sampling `f'' >= 0`.
pub fn check_hermite_hadamard(f: &Expr, a: f64, b: f64) -> Result<HermiteHadamardReport> {
    let xs = uniform_grid(a, b, DEFAULT_GRID_N)?;
    let jets = xs
        .par_iter()
        .map(|&x| f.eval_jet3(x))
        .collect::<Result<Vec<_>>>()?;
    let scale = jets.iter().fold(1.0f64, |s, j| s.max(j.d2.abs()));
    if let Some((x, j)) = xs
        .iter()
        .zip(&jets)
        .filter(|(_, j)| j.d2 < -CONVEXITY_TOL * scale)
        .min_by(|p, q| p.1.d2.total_cmp(&q.1.d2))
    {
        return Err(Error::NotConvex {
            x: *x,
            second_derivative: j.d2,
        });
    }
    let left = f.eval(0.5 * (a + b))?;
    let mean = reference_integral(f, a, b, HERMITE_HADAMARD_TOL)? / (b - a);
    let right = 0.5 * (f.eval(a)? + f.eval(b)?);
    let left_slack = mean - left;
    let right_slack = right - mean;
    let slack_tol = HERMITE_HADAMARD_TOL * mean.abs().max(1.0);
    Ok(HermiteHadamardReport {
        left,
        mean,
        right,
        left_slack,
        right_slack,
        holds: left_slack >= -slack_tol && right_slack >= -slack_tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub expression: &'static str,
    pub a: f64,
    pub b: f64,
    /// Whether `|f'''|` is log-convex on `[a, b]`.
    pub log_convex: bool,
}

impl CatalogEntry {
    pub fn expr(&self) -> Expr {
        parse(self.expression).expect("catalog expressions parse")
    }
}

const fn entry(expression: &'static str, a: f64, b: f64, log_convex: bool) -> CatalogEntry {
    CatalogEntry {
        expression,
        a,
        b,
        log_convex,
    }
}

/// Test integrands with their known verdicts.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry("exp(x)", 0.0, 1.0, true),
        entry("exp(2*x)", -1.0, 1.0, true),
        entry("exp(x)+exp(2*x)", 0.0, 1.0, true),
        entry("exp(-x)", 0.0, 1.0, true),
        entry("1/x", 1.0, 2.0, true),
        entry("log(x)", 1.0, 2.0, true),
        entry("sqrt(x)", 1.0, 4.0, true),
        // Constant f''' = 6: log-linear, accepted with equality.
        entry("x^3", 0.0, 1.0, true),
        entry("x^4", 1.0, 2.0, false),
        entry("x^5", 1.0, 2.0, false),
    ]
}
