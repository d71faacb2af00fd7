//! Empirical derivative constants.
//!
//! Constants are sampled extremes of the partials plus an explicit inflation margin.
//! They are empirical, not certified: nothing guarantees the sampled extremes are
//! the true ones, which is why every soundness check in this crate uses the
//! closed-form oracle constants shipped with the corpus instead.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{
    check_dim, BoxDomain, CurvatureBox, FunctionModel, LipschitzBox, Segment, SquareMatrix,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    /// Points per axis of the tensor grid (`n <= 4`) and strata per axis otherwise.
    pub grid_points_per_axis: usize,
    /// Relative finite-difference step, scaled per axis by `1 + |x_i|`.
    pub fd_step: f64,
    /// Each endpoint `v` moves outward by `inflation * (1 + |v|)`.
    pub inflation: f64,
    pub segment_samples: usize,
    /// Seed for stratified sampling in more than four dimensions.
    pub seed: u64,
    /// Cap on stratified samples.
    pub max_samples: usize,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            grid_points_per_axis: 33,
            fd_step: 1e-5,
            inflation: 1e-3,
            segment_samples: 257,
            seed: 0,
            max_samples: 1_000_000,
        }
    }
}

/// Dimension up to which the full tensor grid is used.
pub const FULL_GRID_MAX_DIM: usize = 4;

impl EstimationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_axis < 2 {
            return Err(Error::Config("grid_points_per_axis must be at least 2".into()));
        }
        if self.segment_samples < 2 {
            return Err(Error::Config("segment_samples must be at least 2".into()));
        }
        if !(self.inflation >= 0.0 && self.inflation.is_finite()) {
            return Err(Error::Config("inflation must be finite and non-negative".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::Config("fd_step must be positive".into()));
        }
        if self.max_samples == 0 {
            return Err(Error::Config("max_samples must be positive".into()));
        }
        Ok(())
    }
}

fn fd_steps(model: &FunctionModel, x: &[f64], step: f64) -> Result<Vec<f64>> {
    check_dim(model.dim(), x.len())?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("finite-difference step {step} must be positive")));
    }
    let dom = model.domain();
    x.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let h = step * (1.0 + xi.abs());
            if xi - h < dom.lower()[i] || xi + h > dom.upper()[i] {
                Err(Error::Domain(format!(
                    "finite-difference stencil at x[{i}] = {xi} with step {h} leaves the model domain"
                )))
            } else {
                Ok(h)
            }
        })
        .collect()
}

/// Central-difference gradient.
pub fn fd_gradient(model: &FunctionModel, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let h = fd_steps(model, x, step)?;
    let mut probe = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + h[i];
        let fp = model.eval(&probe)?;
        probe[i] = x[i] - h[i];
        let fm = model.eval(&probe)?;
        probe[i] = x[i];
        g.push((fp - fm) / (2.0 * h[i]));
    }
    Ok(g)
}

/// Central-difference Hessian, symmetrized.
pub fn fd_hessian(model: &FunctionModel, x: &[f64], step: f64) -> Result<SquareMatrix> {
    let h = fd_steps(model, x, step)?;
    let n = x.len();
    let f0 = model.eval(x)?;
    let mut probe = x.to_vec();
    let mut out = SquareMatrix::zeros(n);
    for i in 0..n {
        probe[i] = x[i] + h[i];
        let fp = model.eval(&probe)?;
        probe[i] = x[i] - h[i];
        let fm = model.eval(&probe)?;
        probe[i] = x[i];
        out.set(i, i, (fp - 2.0 * f0 + fm) / (h[i] * h[i]));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut corner = |si: f64, sj: f64| {
                probe[i] = x[i] + si * h[i];
                probe[j] = x[j] + sj * h[j];
                let v = model.eval(&probe);
                probe[i] = x[i];
                probe[j] = x[j];
                v
            };
            let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                / (4.0 * h[i] * h[j]);
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    Ok(out)
}

/// Analytic gradient when the model has one, central differences otherwise.
pub fn gradient_at(model: &FunctionModel, x: &[f64], fd_step: f64) -> Result<Vec<f64>> {
    match model.analytic_grad(x) {
        Some(g) => g,
        None => fd_gradient(model, x, fd_step),
    }
}

/// Analytic Hessian (averaged with its transpose) when available, else central differences.
pub fn hessian_at(model: &FunctionModel, x: &[f64], fd_step: f64) -> Result<SquareMatrix> {
    match model.analytic_hess(x) {
        Some(h) => {
            let h = h?;
            let n = h.dim();
            let mut s = h.clone();
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = 0.5 * (h.get(i, j) + h.get(j, i));
                    s.set(i, j, v);
                    s.set(j, i, v);
                }
            }
            Ok(s)
        }
        None => fd_hessian(model, x, fd_step),
    }
}

/// Sample locations used by [`estimate_kappa`] / [`estimate_curvature`].
///
/// Full tensor grid for `n <= 4`. Above that, seeded stratified sampling: each axis
/// is cut into `N` strata and every stratum is hit exactly once per axis, with
/// `N = min(g^n, max_samples)`; the `2^n` box corners are appended.
pub fn sample_points(bx: &BoxDomain, cfg: &EstimationConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let n = bx.dim();
    let g = cfg.grid_points_per_axis;
    if n <= FULL_GRID_MAX_DIM {
        let total = g.pow(n as u32);
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let u: Vec<f64> = idx.iter().map(|&k| k as f64 / (g - 1) as f64).collect();
            out.push(grid_point(bx, &u, &idx, g));
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < g {
                    break;
                }
                *slot = 0;
            }
        }
        return Ok(out);
    }
    let full = (g as f64).powi(n as i32);
    let count = if full > cfg.max_samples as f64 {
        cfg.max_samples
    } else {
        full as usize
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let mut perm: Vec<usize> = (0..count).collect();
        perm.shuffle(&mut rng);
        let col: Vec<f64> = perm
            .into_iter()
            .map(|s| (s as f64 + rng.gen::<f64>()) / count as f64)
            .collect();
        columns.push(col);
    }
    let mut out: Vec<Vec<f64>> = (0..count)
        .map(|k| {
            let u: Vec<f64> = columns.iter().map(|c| c[k]).collect();
            bx.lerp(&u)
        })
        .collect();
    if n < 20 {
        for mask in 0..(1usize << n) {
            out.push(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { bx.upper()[i] } else { bx.lower()[i] })
                    .collect(),
            );
        }
    }
    Ok(out)
}

// Exact endpoints on the grid boundary so corner extremes are hit without rounding.
fn grid_point(bx: &BoxDomain, u: &[f64], idx: &[usize], g: usize) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(i, &t)| {
            if idx[i] == 0 {
                bx.lower()[i]
            } else if idx[i] == g - 1 {
                bx.upper()[i]
            } else {
                bx.lower()[i] + t * bx.width(i)
            }
        })
        .collect()
}

fn segment_points(seg: &Segment, samples: usize) -> Result<Vec<Vec<f64>>> {
    (0..samples)
        .map(|k| Ok(seg.point_at(k as f64 / (samples - 1) as f64)?.into_vec()))
        .collect()
}

/// Running per-entry extremes; merging is order independent.
#[derive(Debug, Clone)]
struct Extremes {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Extremes {
    fn empty(len: usize) -> Self {
        Extremes {
            lo: vec![f64::INFINITY; len],
            hi: vec![f64::NEG_INFINITY; len],
        }
    }

    fn absorb(&mut self, values: &[f64]) {
        for (k, &v) in values.iter().enumerate() {
            self.lo[k] = self.lo[k].min(v);
            self.hi[k] = self.hi[k].max(v);
        }
    }

    fn merge(mut self, other: Extremes) -> Self {
        for k in 0..self.lo.len() {
            self.lo[k] = self.lo[k].min(other.lo[k]);
            self.hi[k] = self.hi[k].max(other.hi[k]);
        }
        self
    }
}

const CHUNK: usize = 4096;

/// Reduces `probe` over `points`. On failure, the error of the lowest-indexed
/// failing point is returned, independent of scheduling.
fn scan<F>(points: &[Vec<f64>], len: usize, probe: F) -> Result<Extremes>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let chunk = |pts: &[Vec<f64>]| -> Result<Extremes> {
        let mut ext = Extremes::empty(len);
        for p in pts {
            ext.absorb(&probe(p)?);
        }
        Ok(ext)
    };
    #[cfg(feature = "parallel")]
    let partials: Vec<Result<Extremes>> = {
        use rayon::prelude::*;
        points.par_chunks(CHUNK).map(chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Result<Extremes>> = points.chunks(CHUNK).map(chunk).collect();

    let mut acc = Extremes::empty(len);
    for p in partials {
        acc = acc.merge(p?);
    }
    Ok(acc)
}

fn to_kappa(ext: Extremes, inflation: f64) -> Result<LipschitzBox> {
    Ok(LipschitzBox::new(ext.lo, ext.hi, false)?.inflated(inflation))
}

fn to_curvature(ext: Extremes, n: usize, inflation: f64) -> Result<CurvatureBox> {
    let lo = SquareMatrix::from_row_major(n, ext.lo)?;
    let hi = SquareMatrix::from_row_major(n, ext.hi)?;
    Ok(CurvatureBox::new(lo, hi, false)?.inflated(inflation))
}

fn check_box_in_domain(model: &FunctionModel, bx: &BoxDomain) -> Result<()> {
    check_dim(model.dim(), bx.dim())?;
    if !model.domain().contains_box(bx) {
        return Err(Error::Domain("box is not contained in the model domain".into()));
    }
    Ok(())
}

fn check_segment_in_domain(model: &FunctionModel, seg: &Segment) -> Result<()> {
    check_dim(model.dim(), seg.dim())?;
    let dom = model.domain();
    if !dom.contains(seg.a().coords()) || !dom.contains(seg.b().coords()) {
        return Err(Error::Domain("segment leaves the model domain".into()));
    }
    Ok(())
}

/// First-partial constants over `bx`.
pub fn estimate_kappa(model: &FunctionModel, bx: &BoxDomain, cfg: &EstimationConfig) -> Result<LipschitzBox> {
    check_box_in_domain(model, bx)?;
    let pts = sample_points(bx, cfg)?;
    let ext = scan(&pts, model.dim(), |x| gradient_at(model, x, cfg.fd_step))?;
    to_kappa(ext, cfg.inflation)
}

/// Hessian-entry constants over `bx`.
pub fn estimate_curvature(model: &FunctionModel, bx: &BoxDomain, cfg: &EstimationConfig) -> Result<CurvatureBox> {
    check_box_in_domain(model, bx)?;
    let pts = sample_points(bx, cfg)?;
    let n = model.dim();
    let ext = scan(&pts, n * n, |x| Ok(hessian_at(model, x, cfg.fd_step)?.as_slice().to_vec()))?;
    to_curvature(ext, n, cfg.inflation)
}

/// First-partial constants valid along `seg` only.
pub fn estimate_segment_kappa(model: &FunctionModel, seg: &Segment, cfg: &EstimationConfig) -> Result<LipschitzBox> {
    cfg.validate()?;
    check_segment_in_domain(model, seg)?;
    let pts = segment_points(seg, cfg.segment_samples)?;
    let mut ext = Extremes::empty(model.dim());
    for p in &pts {
        ext.absorb(&gradient_at(model, p, cfg.fd_step)?);
    }
    to_kappa(ext, cfg.inflation)
}

/// Hessian-entry constants valid along `seg` only.
pub fn estimate_segment_curvature(
    model: &FunctionModel,
    seg: &Segment,
    cfg: &EstimationConfig,
) -> Result<CurvatureBox> {
    cfg.validate()?;
    check_segment_in_domain(model, seg)?;
    let n = model.dim();
    let pts = segment_points(seg, cfg.segment_samples)?;
    let mut ext = Extremes::empty(n * n);
    for p in &pts {
        ext.absorb(hessian_at(model, p, cfg.fd_step)?.as_slice());
    }
    to_curvature(ext, n, cfg.inflation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(n: usize, lo: f64, hi: f64) -> BoxDomain {
        BoxDomain::from_bounds(&vec![(lo, hi); n]).unwrap()
    }

    fn square() -> FunctionModel {
        FunctionModel::new(unit_box(1, -1.0, 1.0).padded(0.1, 0.0), |x| x[0] * x[0])
    }

    fn product() -> FunctionModel {
        FunctionModel::new(unit_box(2, -2.0, 2.0), |x| x[0] * x[1])
    }

    #[test]
    fn fd_gradient_of_linear_function() {
        let m = FunctionModel::new(unit_box(3, -5.0, 5.0), |x| 2.0 * x[0] - 3.0 * x[1] + 0.5 * x[2]);
        let g = fd_gradient(&m, &[0.1, -0.2, 1.3], 1e-5).unwrap();
        for (a, b) in g.iter().zip([2.0, -3.0, 0.5]) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn fd_derivatives_of_square() {
        let m = square();
        let g = fd_gradient(&m, &[1.0], 1e-5).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-9);
        let h = fd_hessian(&m, &[1.0], 1e-4).unwrap();
        assert!((h.get(0, 0) - 2.0).abs() < 1e-5);
    }

    #[test]
    fn fd_hessian_of_product() {
        let h = fd_hessian(&product(), &[1.0, 1.0], 1e-4).unwrap();
        let expected = [0.0, 1.0, 1.0, 0.0];
        for (a, b) in h.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn fd_stencil_outside_domain_is_an_error() {
        let m = FunctionModel::new(unit_box(1, 0.0, 1.0), |x| x[0]);
        assert!(matches!(fd_gradient(&m, &[1.0], 1e-5), Err(Error::Domain(_))));
        assert!(fd_hessian(&m, &[0.0], 1e-5).is_err());
    }

    #[test]
    fn estimate_kappa_constant_gradient() {
        let m = FunctionModel::new(unit_box(2, -1.0, 1.0).padded(0.1, 0.0), |x| 3.0 * x[0] - x[1]);
        let cfg = EstimationConfig::default();
        let k = estimate_kappa(&m, &unit_box(2, -1.0, 1.0), &cfg).unwrap();
        for (i, c) in [3.0f64, -1.0].iter().enumerate() {
            let margin = cfg.inflation * (1.0 + c.abs());
            assert!((k.lo()[i] - (c - margin)).abs() < 1e-8);
            assert!((k.hi()[i] - (c + margin)).abs() < 1e-8);
        }
    }

    #[test]
    fn estimate_kappa_contains_square_extremes() {
        let k = estimate_kappa(&square(), &unit_box(1, -1.0, 1.0), &EstimationConfig::default()).unwrap();
        assert!(k.lo()[0] <= -2.0 && k.hi()[0] >= 2.0);
    }

    #[test]
    fn estimate_curvature_of_product() {
        let cfg = EstimationConfig::default();
        let m = estimate_curvature(&product(), &unit_box(2, -1.0, 1.0), &cfg).unwrap();
        assert!(m.lo().get(0, 1) <= 1.0 && m.hi().get(0, 1) >= 1.0);
        assert!(m.hi().get(0, 1) - m.lo().get(0, 1) < 5e-3);
        assert!(m.lo().get(0, 0).abs() < 2e-3 && m.hi().get(1, 1).abs() < 2e-3);
    }

    #[test]
    fn segment_estimate_of_cubic() {
        let m = FunctionModel::new(unit_box(1, -1.0, 1.0), |x| x[0].powi(3)).with_grad(|x| vec![3.0 * x[0] * x[0]]);
        let seg = Segment::from_coords(&[0.0], &[0.5]).unwrap();
        let k = estimate_segment_kappa(&m, &seg, &EstimationConfig::default()).unwrap();
        assert!(k.lo()[0] <= 0.0 && k.hi()[0] >= 0.75);
        let exact = EstimationConfig {
            inflation: 0.0,
            ..EstimationConfig::default()
        };
        let k0 = estimate_segment_kappa(&m, &seg, &exact).unwrap();
        assert_eq!((k0.lo()[0], k0.hi()[0]), (0.0, 0.75));
    }

    #[test]
    fn degenerate_segment_collapses_to_point_gradient() {
        let m = FunctionModel::new(unit_box(2, -1.0, 1.0), |x| x[0] * x[1]).with_grad(|x| vec![x[1], x[0]]);
        let seg = Segment::from_coords(&[0.5, -0.25], &[0.5, -0.25]).unwrap();
        let cfg = EstimationConfig::default();
        let k = estimate_segment_kappa(&m, &seg, &cfg).unwrap();
        let expected = LipschitzBox::degenerate(&[-0.25, 0.5]).unwrap().inflated(cfg.inflation);
        assert_eq!(k, expected);
    }

    #[test]
    fn config_validation() {
        let bad = EstimationConfig {
            grid_points_per_axis: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EstimationConfig {
            segment_samples: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EstimationConfig {
            inflation: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn box_outside_domain_rejected() {
        let r = estimate_kappa(&product(), &unit_box(2, -3.0, 1.0), &EstimationConfig::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn nonfinite_evaluation_carries_point() {
        let m = FunctionModel::new(unit_box(1, -1.0, 1.0), |x| x[0]).with_grad(|x| vec![1.0 / x[0]]);
        let r = estimate_kappa(&m, &unit_box(1, -1.0, 1.0), &EstimationConfig::default());
        assert_eq!(r, Err(Error::Evaluation { point: vec![0.0] }));
    }

    #[test]
    fn stratified_sampling_is_seeded_and_covers_corners() {
        let bx = unit_box(5, 0.0, 1.0);
        let cfg = EstimationConfig {
            grid_points_per_axis: 3,
            ..Default::default()
        };
        let a = sample_points(&bx, &cfg).unwrap();
        let b = sample_points(&bx, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 243 + 32);
        // every stratum of every axis is hit exactly once
        for axis in 0..5 {
            let mut hits = vec![0; 243];
            for p in &a[..243] {
                hits[((p[axis] * 243.0).floor() as usize).min(242)] += 1;
            }
            assert!(hits.iter().all(|&h| h == 1));
        }
        assert!(a.iter().any(|p| p.iter().all(|&c| c == 1.0)));
        let other = sample_points(&bx, &EstimationConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a, other);
    }
}
