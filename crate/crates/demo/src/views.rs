use lipbound::bounds::{evaluate_all, BoundInputs, Locality};
use lipbound::corpus::{corpus_entry, corpus_list};
use lipbound::estimation::{estimate_curvature, estimate_kappa, gradient_at};
use lipbound::expr::expression_model;
use lipbound::solver::{enclose_linear, enclose_quadratic, minimize};
use lipbound::{
    BnbConfig, BoxDomain, CurvatureBox, EstimationConfig, FunctionModel, LipschitzBox, Point, Segment,
    SolverConstants,
};
use serde_json::{json, Value};

const FD_STEP: f64 = 1e-6;
const MAX_TILE_DEPTH: usize = 10;
const MAX_SAMPLES: usize = 4096;

type Res<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub struct Resolved {
    pub model: FunctionModel,
    pub bx: BoxDomain,
    pub kappa: LipschitzBox,
    pub curvature: CurvatureBox,
    /// "oracle" for corpus constants covering the box, "sampled" otherwise.
    pub provenance: &'static str,
}

fn parse_box(s: &str) -> Res<BoxDomain> {
    let bounds = s
        .split(',')
        .map(|axis| {
            let (lo, hi) = axis.split_once(':').ok_or(format!("malformed axis '{axis}'"))?;
            let p = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("malformed number '{v}'"));
            Ok((p(lo)?, p(hi)?))
        })
        .collect::<Res<Vec<_>>>()?;
    BoxDomain::from_bounds(&bounds).map_err(err)
}

/// Corpus name or `expr:...`; an empty `bx` selects the corpus box.
pub fn resolve(function: &str, bx: &str) -> Res<Resolved> {
    let bx = if bx.trim().is_empty() { None } else { Some(parse_box(bx)?) };
    let (model, bx, oracle) = if let Some(src) = function.strip_prefix("expr:") {
        let bx = bx.ok_or("expressions need a box")?;
        (expression_model(src, &bx).map_err(err)?, bx, None)
    } else {
        let e = corpus_entry(function).ok_or(format!("unknown function '{function}'"))?;
        let bx = bx.unwrap_or_else(|| e.bx.clone());
        if bx.dim() != e.bx.dim() {
            return Err(format!("'{function}' takes {} axes", e.bx.dim()));
        }
        let oracle = e.bx.contains_box(&bx).then(|| (e.kappa_oracle.clone(), e.m_oracle.clone()));
        let model = if e.model.domain().contains_box(&bx) {
            e.model
        } else {
            e.model.with_domain(bx.padded(0.1, 1e-3)).map_err(err)?
        };
        (model, bx, oracle)
    };
    let (kappa, curvature, provenance) = match oracle {
        Some((k, m)) => (k, m, "oracle"),
        None => {
            let cfg = EstimationConfig {
                grid_points_per_axis: 17,
                ..EstimationConfig::default()
            };
            (
                estimate_kappa(&model, &bx, &cfg).map_err(err)?,
                estimate_curvature(&model, &bx, &cfg).map_err(err)?,
                "sampled",
            )
        }
    };
    Ok(Resolved {
        model,
        bx,
        kappa,
        curvature,
        provenance,
    })
}

fn box_json(bx: &BoxDomain) -> Value {
    json!((0..bx.dim()).map(|i| [bx.lower()[i], bx.upper()[i]]).collect::<Vec<_>>())
}

pub fn catalog() -> Value {
    json!(corpus_list()
        .iter()
        .map(|e| json!({
            "name": e.name,
            "dim": e.bx.dim(),
            "box": box_json(&e.bx),
            "known_min": e.known_min.as_ref().map(|k| json!({"value": k.value, "point": k.point.coords()})),
        }))
        .collect::<Vec<_>>())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect()
}

pub fn envelope(function: &str, bx: &str, anchor: f64, samples: usize) -> Res<Value> {
    let r = resolve(function, bx)?;
    if r.bx.dim() != 1 {
        return Err("envelopes need a one-dimensional function".into());
    }
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in 2..={MAX_SAMPLES}"));
    }
    let (lo, hi) = (r.bx.lower()[0], r.bx.upper()[0]);
    if !(lo..=hi).contains(&anchor) {
        return Err(format!("anchor {anchor} outside [{lo}, {hi}]"));
    }
    let fa = r.model.eval(&[anchor]).map_err(err)?;
    let grad_a = gradient_at(&r.model, &[anchor], FD_STEP).map_err(err)?;
    let inputs = BoundInputs {
        kappa: &r.kappa,
        curvature: &r.curvature,
        grad_a: &grad_a,
        locality: Locality::Global,
    };
    let xs = linspace(lo, hi, samples);
    let mut f = Vec::with_capacity(samples);
    let mut curves: Vec<(String, Vec<f64>)> = Vec::new();
    for &x in &xs {
        f.push(r.model.eval(&[x]).map_err(err)?);
        let seg = Segment::from_coords(&[anchor], &[x]).map_err(err)?;
        for (k, (variant, value)) in evaluate_all(&seg, &inputs).map_err(err)?.into_iter().enumerate() {
            if curves.len() <= k {
                curves.push((variant.id(), Vec::with_capacity(samples)));
            }
            curves[k].1.push(fa + value);
        }
    }
    Ok(json!({
        "xs": xs,
        "f": f,
        "anchor": anchor,
        "f_anchor": fa,
        "provenance": r.provenance,
        "kappa": [r.kappa.lo()[0], r.kappa.hi()[0]],
        "curvature": [r.curvature.lo().get(0, 0), r.curvature.hi().get(0, 0)],
        "curves": curves.into_iter().map(|(id, values)| json!({"id": id, "values": values})).collect::<Vec<_>>(),
    }))
}

/// Sampled range of `f` on a `per_axis`-point grid over `bx`.
fn sampled_range(model: &FunctionModel, bx: &BoxDomain, per_axis: usize) -> Res<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let n = bx.dim();
    for mut k in 0..per_axis.pow(n as u32) {
        let u: Vec<f64> = (0..n)
            .map(|_| {
                let idx = k % per_axis;
                k /= per_axis;
                idx as f64 / (per_axis - 1) as f64
            })
            .collect();
        let v = model.eval(&bx.lerp(&u)).map_err(err)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

pub fn tiles(function: &str, bx: &str, depth: usize) -> Res<Value> {
    let r = resolve(function, bx)?;
    if r.bx.dim() != 2 {
        return Err("tiles need a two-dimensional function".into());
    }
    if depth > MAX_TILE_DEPTH {
        return Err(format!("depth is capped at {MAX_TILE_DEPTH}"));
    }
    let mut boxes = vec![r.bx.clone()];
    for _ in 0..depth {
        boxes = boxes
            .into_iter()
            .flat_map(|b| {
                let (l, u) = b.bisect(b.longest_axis());
                [l, u]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(boxes.len());
    for b in &boxes {
        let c: Point = b.center();
        let fc = r.model.eval(c.coords()).map_err(err)?;
        let g = gradient_at(&r.model, c.coords(), FD_STEP).map_err(err)?;
        let lin = enclose_linear(fc, &c, b, &r.kappa).map_err(err)?;
        let quad = enclose_quadratic(fc, &g, &c, b, &r.curvature).map_err(err)?;
        let (smin, smax) = sampled_range(&r.model, b, 8)?;
        out.push(json!({
            "box": box_json(b),
            "linear": [lin.lo, lin.hi],
            "quadratic": [quad.lo, quad.hi],
            "sampled": [smin, smax],
        }));
    }
    Ok(json!({"box": box_json(&r.bx), "provenance": r.provenance, "tiles": out}))
}

pub fn heatmap(function: &str, bx: &str, resolution: usize) -> Res<Value> {
    let r = resolve(function, bx)?;
    if r.bx.dim() != 2 {
        return Err("heatmaps need a two-dimensional function".into());
    }
    if !(2..=512).contains(&resolution) {
        return Err("resolution must lie in 2..=512".into());
    }
    let mut values = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        for col in 0..resolution {
            let u = [
                (col as f64 + 0.5) / resolution as f64,
                (row as f64 + 0.5) / resolution as f64,
            ];
            values.push(r.model.eval(&r.bx.lerp(&u)).map_err(err)?);
        }
    }
    Ok(json!({"box": box_json(&r.bx), "resolution": resolution, "values": values}))
}

pub fn minimize_trace(function: &str, bx: &str, tol: f64, budget: usize) -> Res<Value> {
    let r = resolve(function, bx)?;
    let cfg = BnbConfig {
        tol,
        budget,
        fd_step: FD_STEP,
        ..BnbConfig::default()
    };
    let res = minimize(&r.model, &r.bx, &SolverConstants::both(r.kappa, r.curvature), &cfg).map_err(err)?;
    Ok(json!({
        "box": box_json(&r.bx),
        "provenance": r.provenance,
        "best_value": res.best_value,
        "best_point": res.best_point.coords(),
        "certified_lower": res.certified_lower,
        "gap": res.gap,
        "iterations": res.iterations,
        "boxes_pruned": res.boxes_pruned,
        "converged": res.converged,
        "trace": res.trace,
    }))
}
