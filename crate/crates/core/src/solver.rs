//! Range enclosure over a box and a best-first branch-and-bound minimizer.
//!
//! Both enclosures fix the anchor `a` and let the far endpoint range over the box,
//! so `d = x - a` ranges over the shifted box `[lower - a, upper - a]`, which
//! always contains zero.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::domain::{check_dim, BoxDomain, CurvatureBox, FunctionModel, LipschitzBox, Point};
use crate::error::{Error, Result};
use crate::estimation::{self, gradient_at, EstimationConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
    /// Box point at which the per-coordinate lower terms are attained.
    pub witness_lo: Point,
    pub anchor: Point,
}

impl Enclosure {
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn shifted(anchor: &Point, bx: &BoxDomain) -> Result<Vec<(f64, f64)>> {
    check_dim(bx.dim(), anchor.dim())?;
    if !bx.contains(anchor.coords()) {
        return Err(Error::Domain(format!("anchor {anchor} lies outside the box")));
    }
    Ok((0..bx.dim())
        .map(|i| (bx.lower()[i] - anchor[i], bx.upper()[i] - anchor[i]))
        .collect())
}

fn witness(anchor: &Point, steps: Vec<f64>) -> Point {
    Point::new(anchor.coords().iter().zip(steps).map(|(a, d)| a + d).collect())
        .expect("box points are finite")
}

/// Range of `f` over `bx` from the linear bounds anchored at `anchor`.
///
/// Each coordinate term `min(lo_i d_i, hi_i d_i)` is concave and piecewise linear
/// in `d_i`, so its minimum over the step interval sits at an endpoint (and the
/// convex maximum term likewise).
pub fn enclose_linear(f_at_anchor: f64, anchor: &Point, bx: &BoxDomain, k: &LipschitzBox) -> Result<Enclosure> {
    check_dim(bx.dim(), k.dim())?;
    let steps = shifted(anchor, bx)?;
    let mut lo = f_at_anchor;
    let mut hi = f_at_anchor;
    let mut argmin = Vec::with_capacity(steps.len());
    for (i, &(dl, du)) in steps.iter().enumerate() {
        let (kl, kh) = (k.lo()[i], k.hi()[i]);
        let at_l = (kl * dl).min(kh * dl);
        let at_u = (kl * du).min(kh * du);
        if at_u < at_l {
            lo += at_u;
            argmin.push(du);
        } else {
            lo += at_l;
            argmin.push(dl);
        }
        hi += (kl * dl).max(kh * dl).max((kl * du).max(kh * du));
    }
    Ok(Enclosure {
        lo,
        hi,
        witness_lo: witness(anchor, argmin),
        anchor: anchor.clone(),
    })
}

/// Extreme of `g d + c d^2 / 2` over `[dl, du]`; returns `(value, argument)`.
fn diagonal_extreme(g: f64, c: f64, dl: f64, du: f64, minimize: bool) -> (f64, f64) {
    let phi = |d: f64| g * d + 0.5 * c * d * d;
    let better = |a: f64, b: f64| if minimize { a < b } else { a > b };
    let mut best = (phi(dl), dl);
    let mut consider = |d: f64| {
        let v = phi(d);
        if better(v, best.0) {
            best = (v, d);
        }
    };
    consider(du);
    // interior vertex: a minimum when c > 0, a maximum when c < 0
    if (minimize && c > 0.0) || (!minimize && c < 0.0) {
        let v = -g / c;
        if dl < v && v < du {
            consider(v);
        }
    }
    best
}

/// Range of `f` over `bx` from the quadratic bounds anchored at `anchor`.
///
/// Each coordinate's gradient and diagonal-curvature terms together form a
/// one-dimensional quadratic that is extremized exactly over its step interval.
/// Cross terms use the interval `[pl, pu]` of `d_i d_j` obtained by four-product
/// interval multiplication; `min(lo p, hi p)` is concave in `p`, so endpoints suffice.
pub fn enclose_quadratic(
    f_at_anchor: f64,
    grad_at_anchor: &[f64],
    anchor: &Point,
    bx: &BoxDomain,
    m: &CurvatureBox,
) -> Result<Enclosure> {
    check_dim(bx.dim(), m.dim())?;
    check_dim(bx.dim(), grad_at_anchor.len())?;
    let steps = shifted(anchor, bx)?;
    let n = steps.len();
    let mut lo = f_at_anchor;
    let mut hi = f_at_anchor;
    let mut argmin = Vec::with_capacity(n);
    for (i, &(dl, du)) in steps.iter().enumerate() {
        let g = grad_at_anchor[i];
        let (vmin, dmin) = diagonal_extreme(g, m.lo().get(i, i), dl, du, true);
        let (vmax, _) = diagonal_extreme(g, m.hi().get(i, i), dl, du, false);
        lo += vmin;
        hi += vmax;
        argmin.push(dmin);
    }
    let mut cross_lo = 0.0;
    let mut cross_hi = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (al, au) = steps[i];
            let (bl, bu) = steps[j];
            let products = [al * bl, al * bu, au * bl, au * bu];
            let pl = products.iter().copied().fold(f64::INFINITY, f64::min);
            let pu = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (ml, mh) = (m.lo().get(i, j), m.hi().get(i, j));
            cross_lo += (ml * pl).min(mh * pl).min((ml * pu).min(mh * pu));
            cross_hi += (ml * pl).max(mh * pl).max((ml * pu).max(mh * pu));
        }
    }
    Ok(Enclosure {
        lo: lo + 0.5 * cross_lo,
        hi: hi + 0.5 * cross_hi,
        witness_lo: witness(anchor, argmin),
        anchor: anchor.clone(),
    })
}

/// Derivative constants driving the minimizer; at least one must be present.
#[derive(Debug, Clone, Default)]
pub struct SolverConstants {
    pub kappa: Option<LipschitzBox>,
    pub curvature: Option<CurvatureBox>,
}

impl SolverConstants {
    pub fn linear(k: LipschitzBox) -> Self {
        SolverConstants {
            kappa: Some(k),
            curvature: None,
        }
    }

    pub fn quadratic(m: CurvatureBox) -> Self {
        SolverConstants {
            kappa: None,
            curvature: Some(m),
        }
    }

    pub fn both(k: LipschitzBox, m: CurvatureBox) -> Self {
        SolverConstants {
            kappa: Some(k),
            curvature: Some(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbConfig {
    pub tol: f64,
    /// Maximum number of box splits.
    pub budget: usize,
    /// Step for the finite-difference gradient when the model has no analytic one.
    pub fd_step: f64,
    /// When set, constants are re-estimated on every sub-box. The result is then
    /// empirical: sampled constants carry no certificate.
    pub local_estimation: Option<EstimationConfig>,
    pub record_trace: bool,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            tol: 1e-6,
            budget: 1_000_000,
            fd_step: 1e-6,
            local_estimation: None,
            record_trace: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub queue_size: usize,
    pub incumbent: f64,
    pub certified_lower: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BnBResult {
    pub best_value: f64,
    pub best_point: Point,
    pub certified_lower: f64,
    pub gap: f64,
    pub iterations: usize,
    pub boxes_pruned: usize,
    pub converged: bool,
    /// True when sub-box constants were sampled rather than supplied.
    pub empirical: bool,
    pub trace: Vec<TraceRow>,
}

struct Node {
    lower: f64,
    id: usize,
    bx: BoxDomain,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// BinaryHeap is a max-heap: the smallest lower bound, then the oldest box, wins.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower
            .total_cmp(&self.lower)
            .then_with(|| other.id.cmp(&self.id))
    }
}

struct Search<'a> {
    model: &'a FunctionModel,
    constants: &'a SolverConstants,
    cfg: &'a BnbConfig,
    best_value: f64,
    best_point: Point,
}

impl Search<'_> {
    /// Evaluates the center, updates the incumbent and returns the box lower bound.
    fn assess(&mut self, bx: &BoxDomain) -> Result<f64> {
        let center = bx.center();
        let fc = self.model.eval(center.coords())?;
        if fc < self.best_value {
            self.best_value = fc;
            self.best_point = center.clone();
        }
        let (kappa, curvature) = match &self.cfg.local_estimation {
            Some(ecfg) => (
                self.constants
                    .kappa
                    .as_ref()
                    .map(|_| estimation::estimate_kappa(self.model, bx, ecfg))
                    .transpose()?,
                self.constants
                    .curvature
                    .as_ref()
                    .map(|_| estimation::estimate_curvature(self.model, bx, ecfg))
                    .transpose()?,
            ),
            None => (self.constants.kappa.clone(), self.constants.curvature.clone()),
        };
        let mut lower = f64::NEG_INFINITY;
        if let Some(k) = &kappa {
            lower = lower.max(enclose_linear(fc, &center, bx, k)?.lo);
        }
        if let Some(m) = &curvature {
            let g = gradient_at(self.model, center.coords(), self.cfg.fd_step)?;
            lower = lower.max(enclose_quadratic(fc, &g, &center, bx, m)?.lo);
        }
        // The center value is itself an upper bound on the box minimum.
        Ok(lower.min(fc))
    }
}

/// Best-first branch and bound over `bx`.
///
/// Boxes are ordered by enclosure lower bound (ties by creation order), split at
/// the midpoint of their longest axis, and pruned once their lower bound is within
/// `tol` of the incumbent. `certified_lower` is the smallest lower bound over the
/// live queue and every pruned box.
pub fn minimize(
    model: &FunctionModel,
    bx: &BoxDomain,
    constants: &SolverConstants,
    cfg: &BnbConfig,
) -> Result<BnBResult> {
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(Error::Config(format!("tolerance {} must be positive", cfg.tol)));
    }
    if constants.kappa.is_none() && constants.curvature.is_none() {
        return Err(Error::Config("minimize needs Lipschitz or curvature constants".into()));
    }
    check_dim(model.dim(), bx.dim())?;
    if let Some(k) = &constants.kappa {
        check_dim(bx.dim(), k.dim())?;
    }
    if let Some(m) = &constants.curvature {
        check_dim(bx.dim(), m.dim())?;
    }
    if let Some(e) = &cfg.local_estimation {
        e.validate()?;
    }

    let mut search = Search {
        model,
        constants,
        cfg,
        best_value: f64::INFINITY,
        best_point: bx.center(),
    };
    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    let mut pruned_min = f64::INFINITY;
    let mut boxes_pruned = 0usize;
    let mut trace = Vec::new();

    let root_lower = search.assess(bx)?;
    heap.push(Node {
        lower: root_lower,
        id: next_id,
        bx: bx.clone(),
    });
    next_id += 1;

    let mut iterations = 0usize;
    let (certified_lower, converged) = loop {
        let frontier = heap.peek().map_or(f64::INFINITY, |n| n.lower);
        let certified = frontier.min(pruned_min);
        let gap = search.best_value - certified;
        if cfg.record_trace {
            trace.push(TraceRow {
                iteration: iterations,
                queue_size: heap.len(),
                incumbent: search.best_value,
                certified_lower: certified,
                gap,
            });
        }
        if gap <= cfg.tol {
            break (certified, true);
        }
        if iterations >= cfg.budget {
            break (certified, false);
        }
        let node = heap.pop().expect("a positive gap implies a live box");
        iterations += 1;
        if node.lower >= search.best_value - cfg.tol {
            pruned_min = pruned_min.min(node.lower);
            boxes_pruned += 1;
            continue;
        }
        let (left, right) = node.bx.bisect(node.bx.longest_axis());
        for child in [left, right] {
            let lower = search.assess(&child)?;
            if lower >= search.best_value - cfg.tol {
                pruned_min = pruned_min.min(lower);
                boxes_pruned += 1;
            } else {
                heap.push(Node {
                    lower,
                    id: next_id,
                    bx: child,
                });
            }
            next_id += 1;
        }
    };

    Ok(BnBResult {
        best_value: search.best_value,
        best_point: search.best_point,
        certified_lower,
        gap: search.best_value - certified_lower,
        iterations,
        boxes_pruned,
        converged,
        empirical: cfg.local_estimation.is_some(),
        trace,
    })
}
