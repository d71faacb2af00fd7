mod common;

use std::time::Instant;

use common::grid;
use lipbound::corpus::{corpus_entry, corpus_list, CorpusEntry};
use lipbound::solver::{enclose_linear, enclose_quadratic, minimize};
use lipbound::{BnbConfig, BoxDomain, Enclosure, SolverConstants};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn enclosures(e: &CorpusEntry, bx: &BoxDomain) -> (Enclosure, Enclosure) {
    let c = bx.center();
    let fc = e.model.eval(c.coords()).unwrap();
    let g = e.model.analytic_grad(c.coords()).unwrap().unwrap();
    (
        enclose_linear(fc, &c, bx, &e.kappa_oracle).unwrap(),
        enclose_quadratic(fc, &g, &c, bx, &e.m_oracle).unwrap(),
    )
}

fn grid_range(e: &CorpusEntry, bx: &BoxDomain, target: usize) -> (f64, f64) {
    grid(bx, target)
        .iter()
        .map(|p| e.model.eval(p).unwrap())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn sound(enc: &Enclosure, range: (f64, f64)) -> bool {
    let tol = 1e-9 * (1.0 + range.0.abs().max(range.1.abs()));
    enc.lo <= range.0 + tol && range.1 <= enc.hi + tol
}

#[test]
fn enclosures_contain_the_grid_range() {
    for e in corpus_list() {
        let range = grid_range(&e, &e.bx, 10_000);
        let (lin, quad) = enclosures(&e, &e.bx);
        assert!(sound(&lin, range), "{} linear {:?} vs {:?}", e.name, (lin.lo, lin.hi), range);
        assert!(sound(&quad, range), "{} quadratic {:?} vs {:?}", e.name, (quad.lo, quad.hi), range);
        assert!(e.bx.contains(lin.witness_lo.coords()) && e.bx.contains(quad.witness_lo.coords()));
    }
}

#[test]
fn enclosures_on_random_sub_boxes_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for e in corpus_list() {
        for _ in 0..20 {
            let sub = random_sub_box(&e.bx, &mut rng);
            let range = grid_range(&e, &sub, 2_000);
            let (lin, quad) = enclosures(&e, &sub);
            assert!(sound(&lin, range) && sound(&quad, range), "{} on {:?}", e.name, sub);
        }
    }
}

fn random_sub_box(bx: &BoxDomain, rng: &mut ChaCha8Rng) -> BoxDomain {
    let bounds: Vec<(f64, f64)> = (0..bx.dim())
        .map(|i| {
            let a = bx.lower()[i] + rng.gen::<f64>() * bx.width(i);
            let b = bx.lower()[i] + rng.gen::<f64>() * bx.width(i);
            (a.min(b), a.max(b))
        })
        .collect();
    BoxDomain::from_bounds(&bounds).unwrap()
}

/// Halves random sub-boxes and counts how often each flavor's child enclosure
/// reaches outside the parent's. Every widened child is re-checked for soundness.
fn split_widening(seed: u64) -> Vec<(&'static str, usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for e in corpus_list() {
        let (mut trials, mut lin, mut quad) = (0, 0, 0);
        for _ in 0..200 {
            let parent = random_sub_box(&e.bx, &mut rng);
            let axis = rng.gen_range(0..parent.dim());
            let (left, right) = parent.bisect(axis);
            let (pl, pq) = enclosures(&e, &parent);
            for child in [left, right] {
                trials += 1;
                let (cl, cq) = enclosures(&e, &child);
                for (c, p, count) in [(&cl, &pl, &mut lin), (&cq, &pq, &mut quad)] {
                    let tol = 1e-12 * (1.0 + p.lo.abs().max(p.hi.abs()));
                    if c.lo < p.lo - tol || c.hi > p.hi + tol {
                        *count += 1;
                        let range = grid_range(&e, &child, 2_000);
                        assert!(sound(c, range), "{}: widened enclosure is unsound", e.name);
                    }
                }
            }
        }
        out.push((e.name, trials, lin, quad));
    }
    out
}

#[test]
fn halving_a_box_never_widens_the_linear_enclosure() {
    for (name, trials, lin, _) in split_widening(11) {
        assert_eq!(lin, 0, "{name}: {lin} of {trials} splits widened");
    }
}

#[test]
fn quadratic_enclosure_widens_only_where_the_curvature_floor_is_zero() {
    for (name, trials, _, quad) in split_widening(11) {
        let rate = quad as f64 / trials as f64;
        if name == "quartic" {
            // M = [0, 12]: the lower side is the tangent line at the centre, and a
            // child centre nearer the edge has a steeper tangent.
            assert!(rate > 0.1, "{name}: {rate}");
        } else {
            assert!(rate <= 0.01, "{name}: quadratic enclosure widened on {quad} of {trials} splits");
        }
    }
}

#[test]
fn quartic_child_tangent_can_undercut_the_parent() {
    let e = corpus_entry("quartic").unwrap();
    let parent = BoxDomain::from_bounds(&[(-0.6, 0.2)]).unwrap();
    let (left, _) = parent.bisect(0);
    let (_, pq) = enclosures(&e, &parent);
    let (_, cq) = enclosures(&e, &left);
    // parent: centre -0.2, slope -0.032, so lo = 0.0016 - 0.032 * 0.4
    assert!((pq.lo - (0.0016 - 0.032 * 0.4)).abs() < 1e-12);
    // left child: centre -0.4, slope -0.256, so lo = 0.0256 - 0.256 * 0.2
    assert!((cq.lo - (0.0256 - 0.256 * 0.2)).abs() < 1e-12);
    assert!(cq.lo < pq.lo);
    assert!(sound(&cq, grid_range(&e, &left, 10_000)));
}

fn oracle_constants(e: &CorpusEntry) -> SolverConstants {
    SolverConstants::both(e.kappa_oracle.clone(), e.m_oracle.clone())
}

#[test]
fn branch_and_bound_certificates_hold_across_the_corpus() {
    let cfg = BnbConfig {
        tol: 1e-3,
        budget: 200_000,
        record_trace: false,
        ..BnbConfig::default()
    };
    for e in corpus_list().into_iter().filter(|e| e.bx.dim() <= 3) {
        let start = Instant::now();
        let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        let (grid_min, _) = grid_range(&e, &e.bx, 40_000);
        assert!(r.certified_lower <= grid_min + 1e-12, "{}: {} > {}", e.name, r.certified_lower, grid_min);
        assert!(grid_min <= r.best_value + 1e-3, "{}", e.name);
        assert!(r.converged, "{} did not converge ({} iterations)", e.name, r.iterations);
        assert!(r.gap <= cfg.tol && r.gap >= 0.0, "{}", e.name);
        assert!(!r.empirical);
        let km = e.known_min.as_ref().unwrap();
        assert!(r.certified_lower <= km.value + 1e-12, "{}", e.name);
        assert!(elapsed < 10.0, "{} took {elapsed:.2}s", e.name);
    }
}

#[test]
fn six_hump_camel_reaches_the_global_minimum() {
    let e = corpus_entry("six_hump_camel").unwrap();
    let cfg = BnbConfig {
        tol: 1e-3,
        ..BnbConfig::default()
    };
    let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
    assert!((r.certified_lower - -1.0316).abs() <= 1e-3, "{}", r.certified_lower);
    assert!(r.best_value <= -1.0306);
    assert!(r.converged);
    // one of the two symmetric minimizers
    let p = r.best_point.coords();
    assert!((p[0].abs() - 0.0898).abs() < 0.05 && (p[1].abs() - 0.7127).abs() < 0.05);
}

#[test]
fn rosenbrock_converges_from_oracle_constants() {
    let e = corpus_entry("rosenbrock").unwrap();
    let cfg = BnbConfig {
        tol: 1e-3,
        ..BnbConfig::default()
    };
    let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
    assert!(r.converged);
    assert!(r.certified_lower <= 0.0 && r.best_value <= 1e-3);
}

#[test]
fn separable_quadratic_converges_to_its_centre() {
    let e = corpus_entry("quad_shifted").unwrap();
    let cfg = BnbConfig::default();
    let r = minimize(&e.model, &e.bx, &SolverConstants::quadratic(e.m_oracle.clone()), &cfg).unwrap();
    assert!(r.converged);
    assert!(r.best_value <= 1e-6 && r.certified_lower >= -1e-6);
    assert!((r.best_point[0] - 0.3).abs() < 1e-3 && (r.best_point[1] + 0.2).abs() < 1e-3);
}

#[test]
fn trace_rows_are_monotone() {
    let e = corpus_entry("six_hump_camel").unwrap();
    let cfg = BnbConfig {
        tol: 1e-3,
        ..BnbConfig::default()
    };
    let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
    assert!(!r.trace.is_empty());
    for w in r.trace.windows(2) {
        assert!(w[1].incumbent <= w[0].incumbent);
        assert!(w[1].certified_lower >= w[0].certified_lower - 1e-12);
        assert!(w[1].iteration > w[0].iteration);
    }
    let last = r.trace.last().unwrap();
    assert_eq!(last.incumbent, r.best_value);
}

#[test]
fn minimization_is_deterministic() {
    for name in ["six_hump_camel", "log_sum_exp3"] {
        let e = corpus_entry(name).unwrap();
        let cfg = BnbConfig {
            tol: 1e-3,
            ..BnbConfig::default()
        };
        let a = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
        let b = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn exhausted_budget_is_reported_not_raised() {
    let e = corpus_entry("rosenbrock").unwrap();
    let cfg = BnbConfig {
        tol: 1e-9,
        budget: 50,
        ..BnbConfig::default()
    };
    let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
    assert!(!r.converged);
    assert!(r.gap > cfg.tol);
    assert!(r.certified_lower <= r.best_value);
    assert!(r.iterations <= 50);
}

#[test]
fn locally_estimated_constants_are_flagged_empirical() {
    let e = corpus_entry("quartic").unwrap();
    let cfg = BnbConfig {
        tol: 1e-4,
        local_estimation: Some(lipbound::EstimationConfig {
            grid_points_per_axis: 9,
            ..Default::default()
        }),
        ..BnbConfig::default()
    };
    let r = minimize(&e.model, &e.bx, &oracle_constants(&e), &cfg).unwrap();
    assert!(r.empirical && r.converged);
    assert!(r.best_value <= 1e-4);
}
