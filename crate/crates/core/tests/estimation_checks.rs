mod common;

use common::random_points;
use lipbound::corpus::{corpus_entry, corpus_list};
use lipbound::estimation::{
    estimate_curvature, estimate_kappa, estimate_segment_curvature, estimate_segment_kappa, EstimationConfig,
};
use lipbound::verify::random_segments;
use lipbound::{BoxDomain, FunctionModel, Segment, SquareMatrix};

fn box_of(bounds: &[(f64, f64)]) -> BoxDomain {
    BoxDomain::from_bounds(bounds).unwrap()
}

#[test]
fn default_estimates_contain_the_oracle_extremes() {
    let cfg = EstimationConfig::default();
    for e in corpus_list() {
        let k = estimate_kappa(&e.model, &e.bx, &cfg).unwrap();
        assert!(e.kappa_oracle.is_within(&k, 0.0), "{} kappa {:?} vs {:?}", e.name, k, e.kappa_oracle);
        let m = estimate_curvature(&e.model, &e.bx, &cfg).unwrap();
        assert!(e.m_oracle.is_within(&m, 0.0), "{} M {:?} vs {:?}", e.name, m, e.m_oracle);
        assert!(!k.is_strict() && !m.is_strict());
    }
}

#[test]
fn estimates_without_analytic_derivatives_still_contain_the_extremes() {
    let cfg = EstimationConfig::default();
    for name in ["quartic", "sin_cos", "six_hump_camel"] {
        let e = corpus_entry(name).unwrap();
        let f = e.model.clone();
        let bare = FunctionModel::new(e.model.domain().clone(), move |x| f.eval(x).unwrap());
        let k = estimate_kappa(&bare, &e.bx, &cfg).unwrap();
        assert!(e.kappa_oracle.is_within(&k, 0.0), "{name}");
        let m = estimate_curvature(&bare, &e.bx, &cfg).unwrap();
        assert!(e.m_oracle.is_within(&m, 0.0), "{name}");
    }
}

#[test]
fn quartic_curvature_covers_zero_to_twelve() {
    let e = corpus_entry("quartic").unwrap();
    let m = estimate_curvature(&e.model, &e.bx, &EstimationConfig::default()).unwrap();
    assert!(m.lo().get(0, 0) <= 0.0 && m.hi().get(0, 0) >= 12.0);
    // and not much more than that
    assert!(m.lo().get(0, 0) > -0.01 && m.hi().get(0, 0) < 12.02);
}

#[test]
fn sin_cos_gradient_ranges() {
    let e = corpus_entry("sin_cos").unwrap();
    let k = estimate_kappa(&e.model, &e.bx, &EstimationConfig::default()).unwrap();
    // d/dx = cos x cos y spans [-1, 1]; d/dy = -sin x sin y spans [-1, 0] on [0, pi]^2.
    assert!(k.lo()[0] <= -1.0 && k.hi()[0] >= 1.0);
    assert!(k.lo()[1] <= -1.0 && k.hi()[1] >= 0.0);
    assert!(k.hi()[1] < 0.01);
}

#[test]
fn quadratic_forms_give_their_hessian_entries() {
    let h = SquareMatrix::from_rows(&[vec![2.0, -1.0, 0.5], vec![-1.0, 4.0, 0.0], vec![0.5, 0.0, 1.0]]).unwrap();
    let hh = h.clone();
    let bx = box_of(&[(-1.0, 1.0); 3]);
    let model = FunctionModel::new(bx.padded(0.1, 1e-3), move |x| 0.5 * hh.quadratic_form(x));
    let cfg = EstimationConfig {
        grid_points_per_axis: 9,
        ..EstimationConfig::default()
    };
    let m = estimate_curvature(&model, &bx, &cfg).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let v = h.get(i, j);
            let (lo, hi) = (m.lo().get(i, j), m.hi().get(i, j));
            assert!(lo <= v && v <= hi, "({i},{j})");
            assert!(hi - lo < 0.02 * (1.0 + v.abs()), "({i},{j}) width {}", hi - lo);
        }
    }
}

#[test]
fn bilinear_product_has_unit_cross_curvature() {
    let bx = box_of(&[(-2.0, 2.0), (-2.0, 2.0)]);
    let model = FunctionModel::new(bx.padded(0.1, 1e-3), |x| x[0] * x[1]);
    let m = estimate_curvature(&model, &bx, &EstimationConfig::default()).unwrap();
    assert!(m.lo().get(0, 1) <= 1.0 && m.hi().get(0, 1) >= 1.0);
    assert!((m.hi().get(0, 1) - 1.0).abs() < 0.01 && (m.lo().get(0, 1) - 1.0).abs() < 0.01);
    for i in 0..2 {
        assert!(m.lo().get(i, i).abs() < 0.01 && m.hi().get(i, i).abs() < 0.01);
    }
}

#[test]
fn enlarging_the_box_never_shrinks_the_estimate() {
    let cfg = EstimationConfig {
        grid_points_per_axis: 17,
        ..EstimationConfig::default()
    };
    for e in corpus_list().into_iter().filter(|e| e.bx.dim() <= 3) {
        // an inner box whose grid is a subset of the outer grid
        let inner = BoxDomain::from_bounds(
            &(0..e.bx.dim())
                .map(|i| {
                    let w = e.bx.width(i);
                    (e.bx.lower()[i] + 0.25 * w, e.bx.lower()[i] + 0.75 * w)
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let inner_cfg = EstimationConfig {
            grid_points_per_axis: 9,
            ..cfg.clone()
        };
        let tol = 1e-9;
        let ki = estimate_kappa(&e.model, &inner, &inner_cfg).unwrap();
        let ko = estimate_kappa(&e.model, &e.bx, &cfg).unwrap();
        assert!(ki.is_within(&ko, tol), "{}", e.name);
        let mi = estimate_curvature(&e.model, &inner, &inner_cfg).unwrap();
        let mo = estimate_curvature(&e.model, &e.bx, &cfg).unwrap();
        assert!(mi.is_within(&mo, tol), "{}", e.name);
    }
}

#[test]
fn estimation_is_deterministic() {
    let cfg = EstimationConfig {
        seed: 17,
        max_samples: 50_000,
        ..EstimationConfig::default()
    };
    let e = corpus_entry("sin_sum5").unwrap();
    let a = estimate_kappa(&e.model, &e.bx, &cfg).unwrap();
    let b = estimate_kappa(&e.model, &e.bx, &cfg).unwrap();
    assert_eq!(a, b);
    let c = estimate_curvature(&e.model, &e.bx, &cfg).unwrap();
    let d = estimate_curvature(&e.model, &e.bx, &cfg).unwrap();
    assert_eq!(c, d);
}

#[test]
fn segment_estimates_sit_inside_box_estimates() {
    let cfg = EstimationConfig::default();
    for name in ["cubic", "sin_cos", "six_hump_camel", "log_sum_exp3"] {
        let e = corpus_entry(name).unwrap();
        let k_box = e.kappa_oracle.inflated(cfg.inflation);
        let m_box = e.m_oracle.inflated(cfg.inflation);
        for seg in random_segments(&e.bx, 25, 3, 0.0).unwrap() {
            let k = estimate_segment_kappa(&e.model, &seg, &cfg).unwrap();
            assert!(k.is_within(&k_box, 1e-9), "{name}");
            let m = estimate_segment_curvature(&e.model, &seg, &cfg).unwrap();
            assert!(m.is_within(&m_box, 1e-9), "{name}");
        }
    }
}

#[test]
fn degenerate_segment_estimates_the_point_derivative() {
    let e = corpus_entry("six_hump_camel").unwrap();
    let cfg = EstimationConfig {
        inflation: 0.0,
        ..EstimationConfig::default()
    };
    for p in random_points(&e.bx, 5, 4) {
        let seg = Segment::from_coords(&p, &p).unwrap();
        let k = estimate_segment_kappa(&e.model, &seg, &cfg).unwrap();
        assert_eq!(k.lo(), k.hi());
        assert_eq!(k.lo(), e.model.analytic_grad(&p).unwrap().unwrap().as_slice());
    }
}

#[test]
fn boxes_outside_the_domain_are_rejected() {
    let e = corpus_entry("quartic").unwrap();
    let outside = box_of(&[(0.0, 100.0)]);
    let cfg = EstimationConfig::default();
    assert!(matches!(estimate_kappa(&e.model, &outside, &cfg), Err(lipbound::Error::Domain(_))));
    let seg = Segment::from_coords(&[0.0], &[50.0]).unwrap();
    assert!(matches!(estimate_segment_curvature(&e.model, &seg, &cfg), Err(lipbound::Error::Domain(_))));
}
