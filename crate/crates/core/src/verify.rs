//! Verification harness: evaluates every bound variant on random segments and
//! checks each against the true change `f(b) - f(a)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_all, BoundInputs, BoundVariant, Locality, Order, Side};
use crate::domain::{check_dim, BoxDomain, CurvatureBox, FunctionModel, LipschitzBox, Segment};
use crate::error::{Error, Result};
use crate::estimation::{
    estimate_segment_curvature, estimate_segment_kappa, gradient_at, hessian_at, EstimationConfig,
};

/// Comparison tolerance for validity checks: `1e-9 (1 + |delta_f|)`.
pub fn validity_tol(delta_f: f64) -> f64 {
    1e-9 * (1.0 + delta_f.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub variant: BoundVariant,
    pub value: f64,
    pub valid: bool,
    /// Strict inequality held, or strictness was not claimed for this variant.
    pub strict_ok: bool,
    /// Distance from the bound to `delta_f`, positive when the bound holds.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub segment: Segment,
    pub delta_f: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, variant: &BoundVariant) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| &e.variant == variant)
    }

    pub fn all_valid(&self) -> bool {
        self.entries.iter().all(|e| e.valid)
    }
}

fn judge(variant: BoundVariant, value: f64, delta_f: f64, strict: bool) -> BoundEntry {
    let slack = match variant.side {
        Side::Lower => delta_f - value,
        Side::Upper => value - delta_f,
    };
    BoundEntry {
        variant,
        value,
        valid: slack >= -validity_tol(delta_f),
        strict_ok: !strict || slack > 0.0,
        slack,
    }
}

/// Where the derivative constants of a report come from.
#[derive(Debug, Clone)]
pub enum ConstantSource {
    /// Constants valid on a region containing every segment.
    Fixed {
        kappa: LipschitzBox,
        curvature: CurvatureBox,
    },
    /// Constants sampled along each segment.
    SegmentLocal(EstimationConfig),
}

impl ConstantSource {
    pub fn locality(&self) -> Locality {
        match self {
            ConstantSource::Fixed { .. } => Locality::Global,
            ConstantSource::SegmentLocal(_) => Locality::SegmentLocal,
        }
    }
}

/// Builds the report for one segment from explicit constants and gradient.
pub fn report_with(seg: &Segment, delta_f: f64, inputs: &BoundInputs<'_>) -> Result<BoundReport> {
    let degenerate = seg.is_degenerate();
    let entries = evaluate_all(seg, inputs)?
        .into_iter()
        .map(|(v, value)| {
            let strict = !degenerate
                && match v.order {
                    Order::Linear => inputs.kappa.is_strict(),
                    Order::Quadratic => inputs.curvature.is_strict(),
                };
            judge(v, value, delta_f, strict)
        })
        .collect();
    Ok(BoundReport {
        segment: seg.clone(),
        delta_f,
        entries,
    })
}

/// Evaluates `f` at both ends, obtains constants and `grad f(a)`, and judges all variants.
pub fn bound_report(
    model: &FunctionModel,
    seg: &Segment,
    source: &ConstantSource,
    fd_step: f64,
) -> Result<BoundReport> {
    check_dim(model.dim(), seg.dim())?;
    let fa = model.eval(seg.a().coords())?;
    let fb = model.eval(seg.b().coords())?;
    let grad_a = gradient_at(model, seg.a().coords(), fd_step)?;
    let (kappa, curvature) = match source {
        ConstantSource::Fixed { kappa, curvature } => (kappa.clone(), curvature.clone()),
        ConstantSource::SegmentLocal(cfg) => (
            estimate_segment_kappa(model, seg, cfg)?,
            estimate_segment_curvature(model, seg, cfg)?,
        ),
    };
    let inputs = BoundInputs {
        kappa: &kappa,
        curvature: &curvature,
        grad_a: &grad_a,
        locality: source.locality(),
    };
    report_with(seg, fb - fa, &inputs)
}

/// Uniform random segments in `bx`, seeded. Pairs whose step has infinity norm
/// below `min_separation` are redrawn.
pub fn random_segments(bx: &BoxDomain, pairs: usize, seed: u64, min_separation: f64) -> Result<Vec<Segment>> {
    if min_separation > 0.0 && (0..bx.dim()).all(|i| bx.width(i) < min_separation) {
        return Err(Error::Config("box too small for the requested separation".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = bx.dim();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        bx.lerp(&u)
    };
    let mut out = Vec::with_capacity(pairs);
    while out.len() < pairs {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let sep = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if sep >= min_separation {
            out.push(Segment::from_coords(&a, &b)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub pairs: usize,
    pub seed: u64,
    pub min_separation: f64,
    pub fd_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            pairs: 10_000,
            seed: 42,
            min_separation: 0.0,
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub reports: Vec<BoundReport>,
    pub violations: usize,
    pub strict_failures: usize,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs [`bound_report`] on `cfg.pairs` random segments in `bx`.
pub fn verify(model: &FunctionModel, bx: &BoxDomain, source: &ConstantSource, cfg: &VerifyConfig) -> Result<VerifySummary> {
    let segments = random_segments(bx, cfg.pairs, cfg.seed, cfg.min_separation)?;
    let reports = segments
        .iter()
        .map(|s| bound_report(model, s, source, cfg.fd_step))
        .collect::<Result<Vec<_>>>()?;
    let violations = reports.iter().flat_map(|r| &r.entries).filter(|e| !e.valid).count();
    let strict_failures = reports.iter().flat_map(|r| &r.entries).filter(|e| !e.strict_ok).count();
    Ok(VerifySummary {
        reports,
        violations,
        strict_failures,
    })
}

/// `d/dg f(x(g)) = grad f(x(g))^T (b - a)`.
pub fn directional_first(model: &FunctionModel, seg: &Segment, gamma: f64, fd_step: f64) -> Result<f64> {
    let x = seg.point_at(gamma)?;
    let g = gradient_at(model, x.coords(), fd_step)?;
    Ok(g.iter().zip(seg.direction()).map(|(gi, di)| gi * di).sum())
}

/// `d^2/dg^2 f(x(g)) = (b - a)^T H(x(g)) (b - a)`.
pub fn directional_second(model: &FunctionModel, seg: &Segment, gamma: f64, fd_step: f64) -> Result<f64> {
    let x = seg.point_at(gamma)?;
    let h = hessian_at(model, x.coords(), fd_step)?;
    Ok(h.quadratic_form(&seg.direction()))
}
