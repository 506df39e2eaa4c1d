//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Tolerances are pinned here and nowhere else.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod oracle;

use std::f64::consts::E;
use std::panic;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hh3_core::analysis::{catalog, check_log_convexity, check_log_convexity_pow, DEFAULT_GRID_N};
use hh3_core::bounds::{bound_thm1, bound_thm3, holder_factor, mu};
use hh3_core::quadrature::{composite_bound, corrected_midpoint_sum, lemma_residual, reference_integral, Division};
use hh3_core::{parse, DerivEndpoints, Method, QGrid};

use common::*;

const MU_SAMPLES: usize = 1000;
const MU_REL_TOL: f64 = 1e-10;
const MU_ORACLE_TOL: f64 = 1e-13;
const MU_TIME_LIMIT: Duration = Duration::from_secs(5);
const CONSTANT_TOL: f64 = 1e-12;
const REMARK_SAMPLES: usize = 100;
const REMARK_REL_TOL: f64 = 1e-12;
const SOUNDNESS_NS: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];
const SOUNDNESS_SLACK: f64 = 1e-12;
const REFERENCE_TOL: f64 = 1e-13;
const SOUNDNESS_TIME_LIMIT: Duration = Duration::from_secs(30);
const WORKED_TRUE_DEFECT: f64 = 8.638e-4;
const WORKED_THM1_BOUND: f64 = 8.6577e-3;
const WORKED_SIG_FIGS: i32 = 3;
const SCALING_NS: [usize; 5] = [8, 16, 32, 64, 128];
const SCALING_RANGE: (f64, f64) = (14.0, 16.5);
const LEMMA_TOL: f64 = 1e-10;
const HYPOTHESIS_QS: [f64; 3] = [1.0, 2.0, 5.0];
const EXACTNESS_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn mu_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0, 0.0);
    for k in log_spaced(1e-8, 1e8, MU_SAMPLES) {
        let want = oracle::simpson(&|t: f64| t.powi(3) * k.powf(0.5 * t), 0.0, 1.0, MU_ORACLE_TOL);
        let got = mu(k).map_err(|e| format!("mu({k}): {e}"))?;
        let rel = oracle::rel_err(got, want);
        if rel > worst.0 {
            worst = (rel, k);
        }
    }
    let elapsed = start.elapsed();
    check(
        worst.0 <= MU_REL_TOL && elapsed < MU_TIME_LIMIT,
        format!("max rel err {:.2e} at K={:.3e}, {:.2?}", worst.0, worst.1, elapsed),
    )
}

fn derived_constants() -> Outcome {
    let d1 = (mu(E * E).unwrap() - (6.0 - 2.0 * E)).abs();
    let d2 = (mu(1.0 / E).unwrap() - (96.0 - 158.0 * (-0.5f64).exp())).abs();
    let d3 = (holder_factor(1.0 / E, 2.0).unwrap() - (1.0 - 1.0 / E)).abs();
    check(
        d1 <= CONSTANT_TOL && d2 <= CONSTANT_TOL && d3 <= CONSTANT_TOL,
        format!("|diffs| {d1:.1e}, {d2:.1e}, {d3:.1e}"),
    )
}

fn q_one_degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..REMARK_SAMPLES {
        let a = rng.gen_range(-5.0..5.0);
        let b = a + rng.gen_range(0.01..5.0);
        let f3a = 10f64.powf(rng.gen_range(-3.0..3.0));
        let f3b = 10f64.powf(rng.gen_range(-3.0..3.0));
        let e = DerivEndpoints::new(a, b, f3a, f3b).unwrap();
        let t1 = bound_thm1(&e).unwrap();
        let t3 = bound_thm3(&e, 1.0).unwrap();
        worst = worst.max(oracle::rel_err(t3, t1));
    }
    check(worst <= REMARK_REL_TOL, format!("max rel diff {worst:.2e} over {REMARK_SAMPLES} endpoints"))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let grid = QGrid::default();
    let methods = [Method::Thm1, Method::Thm3(2.0), Method::Thm2(2.0), Method::Best];
    let mut cases = 0;
    let mut min_margin = f64::INFINITY;
    for entry in catalog().into_iter().filter(|e| e.log_convex) {
        let f = entry.expr();
        let truth = reference_integral(&f, entry.a, entry.b, REFERENCE_TOL).map_err(|e| e.to_string())?;
        for n in SOUNDNESS_NS {
            let d = Division::uniform(entry.a, entry.b, n).unwrap();
            for m in methods {
                let r = composite_bound(&f, &d, m, &grid).map_err(|e| e.to_string())?;
                let err = (r.corrected_sum - truth).abs();
                if r.certified_bound < err - SOUNDNESS_SLACK {
                    return Err(format!("{} n={n} {m}: bound {:e} < err {err:e}", entry.expression, r.certified_bound));
                }
                min_margin = min_margin.min(r.certified_bound - err);
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        elapsed < SOUNDNESS_TIME_LIMIT,
        format!("{cases} cases, min bound-minus-error {min_margin:.2e}, {elapsed:.2?}"),
    )
}

fn same_sig_figs(x: f64, y: f64, digits: i32) -> bool {
    let round = |v: f64| {
        let scale = 10f64.powi(digits - 1 - v.abs().log10().floor() as i32);
        (v * scale).round() / scale
    };
    round(x) == round(y)
}

fn worked_example() -> Outcome {
    let f = parse("exp(x)").unwrap();
    let d = Division::uniform(0.0, 1.0, 1).unwrap();
    let r = composite_bound(&f, &d, Method::Thm1, &QGrid::default()).unwrap();
    let defect = (r.corrected_sum - (E - 1.0)).abs();
    check(
        same_sig_figs(defect, WORKED_TRUE_DEFECT, WORKED_SIG_FIGS)
            && same_sig_figs(r.certified_bound, WORKED_THM1_BOUND, WORKED_SIG_FIGS),
        format!(
            "defect {defect:.4e}, thm1 bound {:.4e}, ratio {:.2}",
            r.certified_bound,
            r.certified_bound / defect
        ),
    )
}

fn h4_scaling() -> Outcome {
    let f = parse("exp(x)").unwrap();
    let grid = QGrid::default();
    let mut report = Vec::new();
    let mut ok = true;
    for m in [Method::Thm1, Method::Best] {
        let bounds: Vec<f64> = SCALING_NS
            .iter()
            .map(|&n| {
                let d = Division::uniform(0.0, 1.0, n).unwrap();
                composite_bound(&f, &d, m, &grid).unwrap().certified_bound
            })
            .collect();
        let ratios: Vec<String> = bounds
            .windows(2)
            .map(|w| {
                let r = w[0] / w[1];
                ok &= (SCALING_RANGE.0..=SCALING_RANGE.1).contains(&r);
                format!("{r:.4}")
            })
            .collect();
        report.push(format!("{m}: [{}]", ratios.join(", ")));
    }
    check(
        ok,
        format!("bound(n)/bound(2n), n={SCALING_NS:?}, want {SCALING_RANGE:?}; {}", report.join("; ")),
    )
}

fn lemma_identity() -> Outcome {
    let cases = [("x^4", 0.0, 1.0), ("x^5", 0.0, 1.0), ("exp(x)", 0.0, 1.0), ("1/x", 1.0, 2.0)];
    let mut worst = 0.0f64;
    for (src, a, b) in cases {
        let r = lemma_residual(&parse(src).unwrap(), a, b).map_err(|e| format!("{src}: {e}"))?;
        worst = worst.max(r.abs());
    }
    check(worst <= LEMMA_TOL, format!("max |residual| {worst:.2e}"))
}

fn hypothesis_checker() -> Outcome {
    let mut mismatches = Vec::new();
    let entries = catalog();
    for entry in &entries {
        let f = entry.expr();
        let base = check_log_convexity(&f, entry.a, entry.b, DEFAULT_GRID_N).unwrap().passed;
        if base != entry.log_convex {
            mismatches.push(format!("{} verdict {base}", entry.expression));
        }
        for q in HYPOTHESIS_QS {
            let v = check_log_convexity_pow(&f, entry.a, entry.b, q, DEFAULT_GRID_N).unwrap().passed;
            if v != base {
                mismatches.push(format!("{} q={q} verdict {v}", entry.expression));
            }
        }
    }
    let must_fail = entries.iter().any(|e| e.expression == "x^4" && !e.log_convex);
    check(
        mismatches.is_empty() && must_fail,
        format!("{} entries x q in {HYPOTHESIS_QS:?}; mismatches: {mismatches:?}", entries.len()),
    )
}

fn exactness() -> Outcome {
    let mut worst = 0.0f64;
    for (k, src) in ["1", "x", "x^2", "x^3"].iter().enumerate() {
        let f = parse(src).unwrap();
        for n in [1, 2, 3, 7] {
            let s = corrected_midpoint_sum(&f, &Division::uniform(0.0, 1.0, n).unwrap()).unwrap();
            worst = worst.max((s - 1.0 / (k as f64 + 1.0)).abs());
        }
    }
    check(worst <= EXACTNESS_TOL, format!("max |error| {worst:.2e}"))
}

fn cli_contract() -> Outcome {
    let v = schema();
    let runs: Vec<Vec<&str>> = vec![
        with_exp("bounds", &[]),
        with_exp("integrate", &["--n", "1", "--method", "thm1", "--oracle"]),
        with_exp("certify", &["--tol", "1e-6", "--method", "thm1"]),
        with_exp("verify", &[]),
        with_exp("sweep", &["--n-list", "1,2,4,8", "--format", "json"]),
    ];
    for args in &runs {
        let first = hh3(args);
        if code(&first) != 0 {
            return Err(format!("{args:?} exited {}", code(&first)));
        }
        let errs = schema_errors(&v, &json(&first));
        if !errs.is_empty() {
            return Err(format!("{args:?} schema: {errs}"));
        }
        for threads in ["1", "4"] {
            if hh3_env(args, &[("HH3_THREADS", threads)]).stdout != first.stdout {
                return Err(format!("{args:?} differs with HH3_THREADS={threads}"));
            }
        }
        let mut csv: Vec<&str> = args.iter().copied().filter(|a| !matches!(*a, "--format" | "json")).collect();
        csv.extend(["--format", "csv"]);
        let once = hh3(&csv);
        if code(&once) != 0 || once.stdout != hh3(&csv).stdout {
            return Err(format!("{csv:?} csv not deterministic"));
        }
    }
    let table: Vec<(Vec<&str>, i32)> = vec![
        (with_exp("integrate", &["--n", "0"]), 64),
        (with_exp("sweep", &["--n-list", ""]), 64),
        (vec!["bounds", "--f", "log(x)", "--a", "-1", "--b", "1"], 2),
        (vec!["bounds", "--f", "x^2", "--a", "0", "--b", "1"], 2),
        (with_exp("certify", &["--tol", "1e-30"]), 2),
    ];
    for (args, want) in &table {
        let o = hh3(args);
        if code(&o) != *want || !o.stdout.is_empty() || o.stderr.is_empty() {
            return Err(format!("{args:?}: exit {} (want {want}), stdout {} bytes", code(&o), o.stdout.len()));
        }
    }
    Ok(format!("{} subcommands schema-valid and deterministic, {} exit codes", runs.len(), table.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("mu oracle equivalence", mu_oracle),
        ("derived constants", derived_constants),
        ("q = 1 degeneration", q_one_degeneration),
        ("soundness suite", soundness),
        ("worked exp example", worked_example),
        ("h^4 scaling", h4_scaling),
        ("lemma identity", lemma_identity),
        ("hypothesis checker", hypothesis_checker),
        ("exactness", exactness),
        ("cli contract", cli_contract),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
