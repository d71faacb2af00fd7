use std::io::Write;

use lipbound::corpus::{corpus_entry, corpus_list, corpus_names};
use lipbound::estimation::{estimate_curvature, estimate_kappa, gradient_at};
use lipbound::expr::expression_model;
use lipbound::solver::{enclose_linear, enclose_quadratic, minimize};
use lipbound::verify::{bound_report, verify, BoundReport, VerifyConfig};
use lipbound::{
    BnbConfig, BoxDomain, ConstantSource, CurvatureBox, EstimationConfig, FunctionModel, LipschitzBox, Segment,
    SolverConstants,
};

use crate::config::{Command, FunctionChoice, RunConfig};
use crate::constants::read_constants;
use crate::error::{CliError, CliResult};
use crate::report::{Cell, Table};

const FD_STEP: f64 = 1e-6;
/// Grid used when `--local` re-estimates constants on every branch-and-bound box.
const LOCAL_BNB_GRID: usize = 9;

/// A function, the box it is studied on, and oracle constants when they cover that box.
struct Target {
    label: String,
    model: FunctionModel,
    bx: BoxDomain,
    oracle: Option<(LipschitzBox, CurvatureBox)>,
}

fn target(choice: &FunctionChoice, bx: Option<&BoxDomain>) -> CliResult<Target> {
    match choice {
        FunctionChoice::Corpus(name) => {
            let e = corpus_entry(name).ok_or_else(|| {
                CliError::Usage(format!("unknown function '{name}'; known: {}", corpus_names().join(", ")))
            })?;
            let bx = match bx {
                Some(b) => {
                    if b.dim() != e.bx.dim() {
                        return Err(CliError::Usage(format!("'{name}' takes {} axes, box has {}", e.bx.dim(), b.dim())));
                    }
                    b.clone()
                }
                None => e.bx.clone(),
            };
            let covered = e.bx.contains_box(&bx);
            let model = if e.model.domain().contains_box(&bx) {
                e.model
            } else {
                e.model.with_domain(bx.padded(0.1, 1e-3))?
            };
            Ok(Target {
                label: e.name.to_string(),
                model,
                bx,
                oracle: covered.then_some((e.kappa_oracle, e.m_oracle)),
            })
        }
        FunctionChoice::Expr(src) => {
            let bx = bx.ok_or_else(|| CliError::Usage("expression functions need --box".into()))?;
            Ok(Target {
                label: choice.label(),
                model: expression_model(src, bx)?,
                bx: bx.clone(),
                oracle: None,
            })
        }
        FunctionChoice::AllCorpus => unreachable!("expanded by the caller"),
    }
}

fn estimation_config(cfg: &RunConfig) -> EstimationConfig {
    EstimationConfig {
        seed: cfg.seed,
        ..EstimationConfig::default()
    }
}

/// Constants valid on the whole box: from `--constants`, the corpus oracle, or sampling.
fn box_constants(
    cfg: &RunConfig,
    t: &Target,
    diag: &mut dyn Write,
) -> CliResult<(LipschitzBox, CurvatureBox)> {
    let n = t.bx.dim();
    let (k, m, source) = if let Some(path) = &cfg.constants {
        let (k, m) = read_constants(path, n)?;
        (k, m, "read from file")
    } else if let Some((k, m)) = &t.oracle {
        (k.clone(), m.clone(), "from the corpus oracle")
    } else {
        let ecfg = estimation_config(cfg);
        (
            estimate_kappa(&t.model, &t.bx, &ecfg)?,
            estimate_curvature(&t.model, &t.bx, &ecfg)?,
            "sampled on the box (empirical, not certified)",
        )
    };
    writeln!(diag, "{}: constants {source}", t.label)?;
    Ok((k, m))
}

fn source(cfg: &RunConfig, t: &Target, diag: &mut dyn Write) -> CliResult<ConstantSource> {
    if cfg.local {
        writeln!(diag, "{}: segment-local constants (empirical, not certified)", t.label)?;
        return Ok(ConstantSource::SegmentLocal(estimation_config(cfg)));
    }
    let (kappa, curvature) = box_constants(cfg, t, diag)?;
    Ok(ConstantSource::Fixed { kappa, curvature })
}

const BOUND_HEADER: [&str; 8] = [
    "function", "variant", "locality", "bound_value", "delta_f", "valid", "strict_ok", "slack",
];

pub fn bound(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    let t = target(&cfg.function, cfg.bx.as_ref())?;
    let (a, b) = (cfg.xa.clone().expect("validated"), cfg.xb.clone().expect("validated"));
    if a.dim() != t.model.dim() {
        return Err(CliError::Usage(format!("points have {} coordinates, function takes {}", a.dim(), t.model.dim())));
    }
    if !cfg.local && !(t.bx.contains(a.coords()) && t.bx.contains(b.coords())) {
        return Err(CliError::Usage("--xa and --xb must lie inside the box the constants cover".into()));
    }
    let seg = Segment::new(a, b)?;
    let report = bound_report(&t.model, &seg, &source(cfg, &t, diag)?, FD_STEP)?;
    let mut table = Table::new(out, cfg.format, &BOUND_HEADER)?;
    for e in &report.entries {
        table.row(vec![
            t.label.clone().into(),
            e.variant.id().into(),
            e.variant.locality.as_str().into(),
            e.value.into(),
            report.delta_f.into(),
            e.valid.into(),
            e.strict_ok.into(),
            e.slack.into(),
        ])?;
    }
    table.finish()?;
    check_valid(std::slice::from_ref(&report))
}

fn check_valid(reports: &[BoundReport]) -> CliResult<()> {
    let violations = reports.iter().flat_map(|r| &r.entries).filter(|e| !e.valid).count();
    if violations > 0 {
        return Err(CliError::Verification { violations });
    }
    Ok(())
}

pub fn estimate(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    let t = target(&cfg.function, cfg.bx.as_ref())?;
    let ecfg = estimation_config(cfg);
    let k = estimate_kappa(&t.model, &t.bx, &ecfg)?;
    let m = estimate_curvature(&t.model, &t.bx, &ecfg)?;
    writeln!(diag, "{}: sampled constants are empirical, not certified", t.label)?;
    let n = t.bx.dim();
    let mut table = Table::new(out, cfg.format, &["kind", "i", "j", "lo", "hi"])?;
    for i in 0..n {
        table.row(vec!["kappa".into(), (i + 1).into(), Cell::Empty, k.lo()[i].into(), k.hi()[i].into()])?;
    }
    for i in 0..n {
        for j in i..n {
            table.row(vec![
                "M".into(),
                (i + 1).into(),
                (j + 1).into(),
                m.lo().get(i, j).into(),
                m.hi().get(i, j).into(),
            ])?;
        }
    }
    table.finish()
}

pub fn enclose(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    let t = target(&cfg.function, cfg.bx.as_ref())?;
    let (k, m) = if cfg.local {
        writeln!(diag, "{}: box constants sampled (empirical, not certified)", t.label)?;
        let ecfg = estimation_config(cfg);
        (estimate_kappa(&t.model, &t.bx, &ecfg)?, estimate_curvature(&t.model, &t.bx, &ecfg)?)
    } else {
        box_constants(cfg, &t, diag)?
    };
    let anchor = t.bx.center();
    let fc = t.model.eval(anchor.coords())?;
    let g = gradient_at(&t.model, anchor.coords(), FD_STEP)?;
    let lin = enclose_linear(fc, &anchor, &t.bx, &k)?;
    let quad = enclose_quadratic(fc, &g, &anchor, &t.bx, &m)?;
    let mut table = Table::new(out, cfg.format, &["function", "flavor", "lo", "hi", "anchor", "witness_lo"])?;
    for (flavor, e) in [("linear", lin), ("quadratic", quad)] {
        table.row(vec![
            t.label.clone().into(),
            flavor.into(),
            e.lo.into(),
            e.hi.into(),
            Cell::Coords(e.anchor.coords().to_vec()),
            Cell::Coords(e.witness_lo.coords().to_vec()),
        ])?;
    }
    table.finish()
}

const VERIFY_HEADER: [&str; 9] = [
    "seed", "function", "variant", "locality", "delta_f", "bound_value", "valid", "strict_ok", "slack",
];

pub fn verify_cmd(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    let choices: Vec<FunctionChoice> = match &cfg.function {
        FunctionChoice::AllCorpus => corpus_list().iter().map(|e| FunctionChoice::Corpus(e.name.into())).collect(),
        other => vec![other.clone()],
    };
    let vcfg = VerifyConfig {
        pairs: cfg.pairs,
        seed: cfg.seed,
        fd_step: FD_STEP,
        ..VerifyConfig::default()
    };
    let mut table = Table::new(out, cfg.format, &VERIFY_HEADER)?;
    let mut violations = 0;
    for choice in &choices {
        let t = target(choice, cfg.bx.as_ref())?;
        let summary = verify(&t.model, &t.bx, &source(cfg, &t, diag)?, &vcfg)?;
        for r in &summary.reports {
            for e in &r.entries {
                table.row(vec![
                    cfg.seed.into(),
                    t.label.clone().into(),
                    e.variant.id().into(),
                    e.variant.locality.as_str().into(),
                    r.delta_f.into(),
                    e.value.into(),
                    e.valid.into(),
                    e.strict_ok.into(),
                    e.slack.into(),
                ])?;
            }
        }
        writeln!(
            diag,
            "{}: {} segments, {} violations, {} strict failures",
            t.label,
            summary.reports.len(),
            summary.violations,
            summary.strict_failures
        )?;
        violations += summary.violations;
    }
    table.finish()?;
    if violations > 0 {
        return Err(CliError::Verification { violations });
    }
    Ok(())
}

const MINIMIZE_HEADER: [&str; 10] = [
    "record",
    "iteration",
    "queue_size",
    "incumbent",
    "certified_lower",
    "gap",
    "boxes_pruned",
    "best_point",
    "converged",
    "empirical",
];

pub fn minimize_cmd(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    let t = target(&cfg.function, cfg.bx.as_ref())?;
    let (k, m) = box_constants(cfg, &t, diag)?;
    let bcfg = BnbConfig {
        tol: cfg.tol,
        budget: cfg.budget,
        fd_step: FD_STEP,
        local_estimation: cfg.local.then(|| EstimationConfig {
            grid_points_per_axis: LOCAL_BNB_GRID,
            ..estimation_config(cfg)
        }),
        record_trace: true,
    };
    let r = minimize(&t.model, &t.bx, &SolverConstants::both(k, m), &bcfg)?;
    let mut table = Table::new(out, cfg.format, &MINIMIZE_HEADER)?;
    for row in &r.trace {
        table.row(vec![
            "trace".into(),
            row.iteration.into(),
            row.queue_size.into(),
            row.incumbent.into(),
            row.certified_lower.into(),
            row.gap.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ])?;
    }
    table.row(vec![
        "result".into(),
        r.iterations.into(),
        Cell::Empty,
        r.best_value.into(),
        r.certified_lower.into(),
        r.gap.into(),
        r.boxes_pruned.into(),
        Cell::Coords(r.best_point.coords().to_vec()),
        r.converged.into(),
        r.empirical.into(),
    ])?;
    table.finish()?;
    writeln!(
        diag,
        "{}: best {} certified lower {} gap {:e} after {} iterations{}",
        t.label,
        r.best_value,
        r.certified_lower,
        r.gap,
        r.iterations,
        if r.converged { "" } else { " (budget exhausted)" }
    )?;
    Ok(())
}

pub fn dispatch(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    match cfg.command {
        Command::Bound => bound(cfg, out, diag),
        Command::Estimate => estimate(cfg, out, diag),
        Command::Enclose => enclose(cfg, out, diag),
        Command::Verify => verify_cmd(cfg, out, diag),
        Command::Minimize => minimize_cmd(cfg, out, diag),
    }
}
