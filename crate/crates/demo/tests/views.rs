use lipbound_demo::views::{catalog, envelope, heatmap, minimize_trace, resolve, tiles};
use serde_json::Value;

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn catalog_lists_every_corpus_entry() {
    let c = catalog();
    let names: Vec<&str> = c.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"six_hump_camel"));
    let cubic = c.as_array().unwrap().iter().find(|e| e["name"] == "cubic").unwrap();
    assert_eq!(cubic["dim"], 1);
    assert_eq!(cubic["box"], serde_json::json!([[-1.0, 1.0]]));
}

#[test]
fn envelopes_bracket_the_function() {
    let v = envelope("quartic", "", 0.3, 101).unwrap();
    assert_eq!(v["provenance"], "oracle");
    let f = floats(&v["f"]);
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 12);
    for c in curves {
        let id = c["id"].as_str().unwrap();
        let vals = floats(&c["values"]);
        assert_eq!(vals.len(), 101);
        for (fx, b) in f.iter().zip(&vals) {
            let tol = 1e-9 * (1.0 + fx.abs());
            if id.ends_with("lower") {
                assert!(*b <= fx + tol, "{id}");
            } else {
                assert!(*b >= fx - tol, "{id}");
            }
        }
    }
    // the sample grid spans the whole box
    let xs = floats(&v["xs"]);
    assert_eq!(xs[0], -1.0);
    assert_eq!(*xs.last().unwrap(), 1.0);
}

#[test]
fn envelope_for_an_expression_uses_sampled_constants() {
    let v = envelope("expr:sin(3*x1)", "0:2", 1.0, 33).unwrap();
    assert_eq!(v["provenance"], "sampled");
    let k = floats(&v["kappa"]);
    assert!(k[0] <= -2.9 && k[1] >= 2.9);
}

#[test]
fn envelope_rejects_bad_requests() {
    assert!(envelope("six_hump_camel", "", 0.0, 10).is_err());
    assert!(envelope("cubic", "", 2.0, 10).is_err());
    assert!(envelope("cubic", "", 0.0, 1).is_err());
    assert!(envelope("nope", "", 0.0, 10).is_err());
    assert!(envelope("expr:x1", "", 0.0, 10).is_err());
    assert!(envelope("expr:x1", "1:0", 0.0, 10).is_err());
}

#[test]
fn tiles_are_sound_and_tighten_with_depth() {
    let coarse = tiles("six_hump_camel", "", 0).unwrap();
    let fine = tiles("six_hump_camel", "", 6).unwrap();
    assert_eq!(coarse["tiles"].as_array().unwrap().len(), 1);
    let tiles_fine = fine["tiles"].as_array().unwrap();
    assert_eq!(tiles_fine.len(), 64);
    for t in tiles_fine {
        let s = floats(&t["sampled"]);
        for flavor in ["linear", "quadratic"] {
            let e = floats(&t[flavor]);
            assert!(e[0] <= s[0] + 1e-9 && s[1] <= e[1] + 1e-9);
        }
    }
    let width = |t: &Value| {
        let q = floats(&t["quadratic"]);
        q[1] - q[0]
    };
    let coarse_width = width(&coarse["tiles"][0]);
    let widest_fine = tiles_fine.iter().map(width).fold(0.0, f64::max);
    assert!(widest_fine < coarse_width / 4.0);
    assert!(tiles("cubic", "", 2).is_err());
    assert!(tiles("sin_cos", "", 11).is_err());
}

#[test]
fn heatmap_is_row_major_from_the_lower_corner() {
    let v = heatmap("expr:x1 + 10*x2", "0:1,0:1", 4).unwrap();
    let vals = floats(&v["values"]);
    assert_eq!(vals.len(), 16);
    assert!((vals[0] - (0.125 + 1.25)).abs() < 1e-12);
    assert!((vals[1] - (0.375 + 1.25)).abs() < 1e-12);
    assert!((vals[4] - (0.125 + 3.75)).abs() < 1e-12);
}

#[test]
fn minimize_trace_matches_the_solver() {
    let v = minimize_trace("six_hump_camel", "", 1e-3, 100_000).unwrap();
    assert_eq!(v["converged"], true);
    assert!(v["best_value"].as_f64().unwrap() <= -1.0306);
    let trace = v["trace"].as_array().unwrap();
    assert!(!trace.is_empty());
    assert!(trace[0].get("certified_lower").is_some());
    assert!(minimize_trace("six_hump_camel", "", -1.0, 10).is_err());
}

#[test]
fn corpus_box_outside_the_oracle_falls_back_to_sampling() {
    let inside = resolve("rosenbrock", "-1:1,0:1").unwrap();
    assert_eq!(inside.provenance, "oracle");
    let outside = resolve("rosenbrock", "-3:1,0:1").unwrap();
    assert_eq!(outside.provenance, "sampled");
}
