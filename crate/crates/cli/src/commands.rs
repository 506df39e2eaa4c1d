use hh3_core::analysis::{self, ConvexityReport};
use hh3_core::bounds::{self, DerivEndpoints};
use hh3_core::quadrature::{self, Division, IntervalBound, QuadResult};
use hh3_core::{Error, Expr, Method, QGrid};

use crate::report::{Obj, Report, Table, Value};
use crate::CliError;

/// Tolerance of every reference integral the CLI computes.
const ORACLE_TOL: f64 = 1e-13;

pub struct Problem {
    pub text: String,
    pub expr: Expr,
    pub a: f64,
    pub b: f64,
}

impl Problem {
    fn input(&self) -> Obj {
        Obj::new()
            .field("f", self.text.as_str())
            .field("a", self.a)
            .field("b", self.b)
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Thm1 => "thm1",
        Method::Thm2(_) => "thm2",
        Method::Thm3(_) => "thm3",
        Method::Best => "best",
    }
}

fn method_q(m: Method) -> Option<f64> {
    match m {
        Method::Thm2(q) | Method::Thm3(q) => Some(q),
        Method::Thm1 | Method::Best => None,
    }
}

fn convexity(r: &ConvexityReport, grid_n: usize) -> Obj {
    Obj::new()
        .field("verdict", if r.passed { "passed" } else { "failed" })
        .field("evidence", "sampled")
        .field("q", r.q)
        .field("worst_violation", r.worst_violation)
        .field("witness", Value::List(vec![r.witness.0.into(), r.witness.1.into()]))
        .field("grid_n", grid_n)
        .field("pairs_tested", r.pairs_tested)
}

pub fn bounds(p: &Problem, grid: &QGrid, grid_n: usize) -> Result<Report, CliError> {
    let ja = p.expr.eval_jet3(p.a)?;
    let jb = p.expr.eval_jet3(p.b)?;
    let e = DerivEndpoints::new(p.a, p.b, ja.d3.abs(), jb.d3.abs())?;
    let r = bounds::best_bound(&e, grid)?;
    let lc = analysis::check_log_convexity(&p.expr, p.a, p.b, grid_n)?;
    let body = Obj::new()
        .field("input", p.input().field("q_grid_points", grid.points().len()))
        .field(
            "result",
            Obj::new()
                .field("f3a_abs", e.f3a_abs)
                .field("f3b_abs", e.f3b_abs)
                .field("K", r.ratios.k)
                .field("M", r.ratios.m)
                .field("chi1", r.chi1)
                .field("chi2", r.chi2)
                .field("q2", r.q2)
                .field("chi3", r.chi3)
                .field("q3", r.q3)
                .field("min", r.min_value)
                .field("argmin", r.argmin.to_string()),
        )
        .field("log_convexity", convexity(&lc, grid_n))
        .field("hypothesis_supported", lc.passed);
    Ok(Report::new("bounds", body))
}

fn quad_fields(r: &QuadResult) -> Obj {
    Obj::new()
        .field("n", r.n())
        .field("method", method_name(r.method))
        .field("q", method_q(r.method))
        .field("midpoint_sum", r.midpoint_sum)
        .field("corrected_sum", r.corrected_sum)
        .field("certified_bound", r.certified_bound)
        .field("midpoint_bound", r.midpoint_bound)
        .field("midpoint_bound_heuristic", r.midpoint_bound_heuristic)
}

fn interval(ib: &IntervalBound) -> Value {
    Obj::new()
        .field("a", ib.a)
        .field("b", ib.b)
        .field("bound", ib.bound)
        .field("K1", ib.k1)
        .field("M1", ib.m1)
        .field("kind", ib.kind.to_string())
        .field("q", ib.q)
        .into()
}

pub fn integrate(
    p: &Problem,
    n: usize,
    method: Method,
    grid: &QGrid,
    oracle: bool,
    per_interval: bool,
) -> Result<Report, CliError> {
    let d = Division::uniform(p.a, p.b, n)?;
    let r = quadrature::composite_bound(&p.expr, &d, method, grid)?;
    let mut body = Obj::new()
        .field("input", p.input().field("n", n))
        .field("result", quad_fields(&r));
    if oracle {
        let reference = quadrature::reference_integral(&p.expr, p.a, p.b, ORACLE_TOL)?;
        let true_error = (r.corrected_sum - reference).abs();
        body.push(
            "oracle",
            Obj::new()
                .field("reference", reference)
                .field("true_error", true_error)
                .field("midpoint_true_error", (r.midpoint_sum - reference).abs())
                .field("sound", r.certified_bound >= true_error),
        );
    }
    if per_interval {
        body.push(
            "per_interval",
            Value::List(r.per_interval.iter().map(interval).collect()),
        );
    }
    Ok(Report::new("integrate", body))
}

pub fn certify(p: &Problem, tol: f64, method: Method, grid: &QGrid) -> Result<Report, CliError> {
    let out = quadrature::certify(&p.expr, p.a, p.b, tol, method, grid)?;
    let body = Obj::new()
        .field("input", p.input().field("tol", tol))
        .field(
            "result",
            Obj::new()
                .field("value", out.value())
                .field("certified_bound", out.result.certified_bound)
                .field("n_final", out.n_final)
                .field("iterations", out.iterations)
                .field("method", method_name(method))
                .field("q", method_q(method)),
        );
    Ok(Report::new("certify", body))
}

pub fn verify(p: &Problem, q: f64, grid_n: usize) -> Result<Report, CliError> {
    let lc = analysis::check_log_convexity(&p.expr, p.a, p.b, grid_n)?;
    let lcq = analysis::check_log_convexity_pow(&p.expr, p.a, p.b, q, grid_n)?;
    let hh = match analysis::check_hermite_hadamard(&p.expr, p.a, p.b) {
        Ok(r) => Obj::new()
            .field("convex", true)
            .field("left", r.left)
            .field("mean", r.mean)
            .field("right", r.right)
            .field("left_slack", r.left_slack)
            .field("right_slack", r.right_slack)
            .field("holds", r.holds),
        Err(Error::NotConvex { x, second_derivative }) => Obj::new()
            .field("convex", false)
            .field("witness", x)
            .field("second_derivative", second_derivative),
        Err(e) => return Err(e.into()),
    };
    let residual = quadrature::lemma_residual(&p.expr, p.a, p.b)?;
    let body = Obj::new()
        .field("input", p.input().field("q", q).field("grid_n", grid_n))
        .field("log_convexity", convexity(&lc, grid_n))
        .field("log_convexity_q", convexity(&lcq, grid_n))
        .field("hermite_hadamard", hh)
        .field("lemma_residual", residual);
    Ok(Report::new("verify", body))
}

pub const SWEEP_COLUMNS: [&str; 7] = [
    "n",
    "midpoint_sum",
    "corrected_sum",
    "bound_thm1",
    "bound_best",
    "true_error",
    "ratio",
];

pub fn sweep(p: &Problem, ns: &[usize], grid: &QGrid) -> Result<Report, CliError> {
    let reference = quadrature::reference_integral(&p.expr, p.a, p.b, ORACLE_TOL)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let d = Division::uniform(p.a, p.b, n)?;
        let thm1 = quadrature::composite_bound(&p.expr, &d, Method::Thm1, grid)?;
        let best = quadrature::composite_bound(&p.expr, &d, Method::Best, grid)?;
        let true_error = (best.corrected_sum - reference).abs();
        rows.push(vec![
            Value::Int(n as u64),
            best.midpoint_sum.into(),
            best.corrected_sum.into(),
            thm1.certified_bound.into(),
            best.certified_bound.into(),
            true_error.into(),
            (best.certified_bound / true_error).into(),
        ]);
    }
    let body = Obj::new().field("input", p.input().field("reference", reference));
    Ok(Report::new("sweep", body).with_table(Table {
        columns: SWEEP_COLUMNS.to_vec(),
        rows,
    }))
}
