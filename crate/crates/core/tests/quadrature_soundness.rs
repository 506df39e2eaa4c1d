mod common;

use std::f64::consts::E;

use hh3_core::analysis::catalog;
use hh3_core::quadrature::{
    certify, composite_bound, corrected_midpoint_sum, lemma_residual, midpoint_sum, reference_integral, Division,
    Method,
};
use hh3_core::{parse, BoundKind, Error, QGrid};

const NS: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];

fn methods() -> [Method; 4] {
    [Method::Thm1, Method::Thm2(2.0), Method::Thm3(2.0), Method::Best]
}

#[test]
fn certified_bound_covers_corrected_sum() {
    let grid = QGrid::default();
    for entry in catalog().into_iter().filter(|e| e.log_convex) {
        let f = entry.expr();
        let truth = reference_integral(&f, entry.a, entry.b, 1e-13).unwrap();
        for n in NS {
            let d = Division::uniform(entry.a, entry.b, n).unwrap();
            for method in methods() {
                let r = composite_bound(&f, &d, method, &grid).unwrap();
                let err = (r.corrected_sum - truth).abs();
                assert!(
                    r.certified_bound >= err - 1e-12,
                    "{} n={n} {method}: bound {} < err {err}",
                    entry.expression,
                    r.certified_bound
                );
                assert!(r.per_interval.iter().all(|ib| ib.bound >= 0.0));
            }
        }
    }
}

#[test]
fn corrected_rule_is_exact_for_cubics() {
    for src in ["1", "x", "x^2", "x^3", "2 - 3*x + 0.5*x^2 - 1.5*x^3"] {
        let f = parse(src).unwrap();
        let truth = reference_integral(&f, 0.0, 1.0, 1e-13).unwrap();
        for n in [1, 3, 7] {
            let d = Division::uniform(0.0, 1.0, n).unwrap();
            let c = corrected_midpoint_sum(&f, &d).unwrap();
            assert!((c - truth).abs() <= 1e-12, "{src} n={n}");
        }
    }
}

#[test]
fn lemma_identity_holds() {
    for (src, a, b) in [("x^4", 0.0, 1.0), ("x^5", 0.0, 1.0), ("exp(x)", 0.0, 1.0), ("1/x", 1.0, 2.0)] {
        let r = lemma_residual(&parse(src).unwrap(), a, b).unwrap();
        assert!(r.abs() <= 1e-10, "{src}: {r}");
    }
}

#[test]
fn best_dominates_every_method_per_interval() {
    let grid = QGrid::default();
    for entry in catalog().into_iter().filter(|e| e.log_convex) {
        let f = entry.expr();
        let d = Division::uniform(entry.a, entry.b, 8).unwrap();
        let best = composite_bound(&f, &d, Method::Best, &grid).unwrap();
        let mut others = vec![composite_bound(&f, &d, Method::Thm1, &grid).unwrap()];
        for &q in grid.points() {
            others.push(composite_bound(&f, &d, Method::Thm2(q), &grid).unwrap());
            others.push(composite_bound(&f, &d, Method::Thm3(q), &grid).unwrap());
        }
        for other in &others {
            assert!(best.certified_bound <= other.certified_bound);
            for (b, o) in best.per_interval.iter().zip(&other.per_interval) {
                assert!(b.bound <= o.bound);
            }
        }
    }
}

#[test]
fn bound_decreases_under_doubling() {
    let grid = QGrid::default();
    for entry in catalog().into_iter().filter(|e| e.log_convex) {
        let f = entry.expr();
        let bounds: Vec<f64> = NS
            .iter()
            .map(|&n| {
                let d = Division::uniform(entry.a, entry.b, n).unwrap();
                composite_bound(&f, &d, Method::Best, &grid).unwrap().certified_bound
            })
            .collect();
        for w in bounds.windows(2) {
            assert!(w[1] < w[0], "{}: {bounds:?}", entry.expression);
        }
    }
}

#[test]
fn worked_exp_example() {
    let f = parse("exp(x)").unwrap();
    let d = Division::uniform(0.0, 1.0, 1).unwrap();
    let r = composite_bound(&f, &d, Method::Thm1, &QGrid::default()).unwrap();
    let defect = (r.corrected_sum - (E - 1.0)).abs();
    assert!((defect - 8.638e-4).abs() < 5e-7);
    assert!((r.certified_bound - 8.659e-3).abs() < 5e-6);
    assert!((r.certified_bound / defect - 10.0).abs() < 0.05);
    assert_eq!(r.per_interval[0].kind, BoundKind::Chi1);
    assert!((r.per_interval[0].k1 - 1.0 / E).abs() < 1e-16);
}

#[test]
fn certify_exp_to_one_in_a_million() {
    let f = parse("exp(x)").unwrap();
    let out = certify(&f, 0.0, 1.0, 1e-6, Method::Thm1, &QGrid::default()).unwrap();
    assert!(out.result.certified_bound <= 1e-6);
    assert!((out.value() - (E - 1.0)).abs() <= out.result.certified_bound);
    assert!(out.n_final.is_power_of_two());
    assert_eq!(out.iterations, out.n_final.trailing_zeros() as usize + 1);
    // One step earlier must not have sufficed.
    let prev = composite_bound(
        &f,
        &Division::uniform(0.0, 1.0, out.n_final / 2).unwrap(),
        Method::Thm1,
        &QGrid::default(),
    )
    .unwrap();
    assert!(prev.certified_bound > 1e-6);
}

#[test]
fn composite_results_are_deterministic() {
    let f = parse("exp(x)+exp(2*x)").unwrap();
    let d = Division::uniform(0.0, 1.0, 1000).unwrap();
    let grid = QGrid::default();
    let first = composite_bound(&f, &d, Method::Best, &grid).unwrap();
    for _ in 0..3 {
        assert_eq!(composite_bound(&f, &d, Method::Best, &grid).unwrap(), first);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| composite_bound(&f, &d, Method::Best, &grid).unwrap());
    assert_eq!(serial, first);
}

#[test]
fn non_uniform_division() {
    let f = parse("exp(x)").unwrap();
    let d = Division::new(vec![0.0, 0.1, 0.35, 0.7, 1.0]).unwrap();
    let r = composite_bound(&f, &d, Method::Best, &QGrid::default()).unwrap();
    assert_eq!(r.midpoint_sum, midpoint_sum(&f, &d).unwrap());
    assert!((r.corrected_sum - (E - 1.0)).abs() <= r.certified_bound);
}

#[test]
fn domain_errors_propagate() {
    let f = parse("log(x)").unwrap();
    let d = Division::uniform(-1.0, 1.0, 4).unwrap();
    assert!(matches!(midpoint_sum(&f, &d), Err(Error::Domain { .. })));
    assert!(matches!(
        composite_bound(&f, &d, Method::Thm1, &QGrid::default()),
        Err(Error::Domain { .. })
    ));
}
