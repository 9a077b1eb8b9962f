use std::fs;
use std::io::Write;
use std::path::Path;

use hcalg::criterion::{
    check_symbol, even_rays, validate_arc, InflateSearch, PipelineOptions, PipelineOutcome, ScanOptions,
    Verdict,
};
use hcalg::levelset::{
    find_seed_scan, find_seed_vertical, find_seeds_scan, trace_both, LevelArc, LevelSetError, TraceOptions,
};
use hcalg::literal::{format_complex, parse_complex};
use hcalg::obstruction::{orbit_power_zero_parity, AffineMap, ExpWeight};
use hcalg::render::{arc_csv, arcs_csv, arcs_svg, criterion_svg, parity_csv, witness_csv, SvgOptions};
use hcalg::symbol::{Polynomial, Symbol};
use hcalg::witness::{DecayRate, ProblemFile, WitnessError, WitnessProblem, WitnessStep};
use hcalg::{CriterionReport, C64};
use serde::Serialize;

use crate::error::{numeric, CliError};
use crate::{CheckArgs, TraceArgs, WitnessArgs, ZerosArgs};

/// Samples per ray when searching for a seed.
const RAY_SAMPLES: usize = 4000;

pub fn parse_symbol(text: &str) -> Result<Symbol, CliError> {
    text.parse().map_err(|e| CliError::Config(format!("{e}")))
}

fn parse_polynomial(text: &str) -> Result<Polynomial, CliError> {
    let symbol = parse_symbol(text)?;
    symbol
        .as_polynomial()
        .cloned()
        .ok_or_else(|| CliError::Config(format!("`{text}` is not a polynomial literal")))
}

fn parse_c(text: &str) -> Result<C64, CliError> {
    parse_complex(text).map_err(|e| CliError::Config(e.to_string()))
}

fn positive(name: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{name} must be positive, got {value}")))
    }
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Config(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Config(e.to_string()))
}

pub fn trace(args: &TraceArgs) -> Result<(), CliError> {
    let phi = parse_symbol(&args.symbol)?;
    positive("level", args.level)?;
    positive("step", args.step)?;
    positive("t-max", args.t_max)?;
    let opts = TraceOptions { max_points: args.max_points.max(2), ..TraceOptions::with_step(args.step) };

    // Explicit seeds must work; seeds from the default ray fan may miss.
    let explicit = !args.seed_rays.is_empty() || !args.seed_xs.is_empty();
    let mut seeds: Vec<Result<C64, LevelSetError>> = Vec::new();
    for &theta in &args.seed_rays {
        seeds.push(find_seed_scan(&phi, args.level, theta, args.t_max, RAY_SAMPLES));
    }
    for &x in &args.seed_xs {
        seeds.push(find_seed_vertical(&phi, args.level, x, args.t_max, RAY_SAMPLES));
    }
    if !explicit {
        if args.rays == 0 {
            return Err(CliError::Config("--rays must be at least 1".into()));
        }
        // Every crossing on every ray, so nested components are found too.
        for theta in even_rays(args.rays) {
            seeds.extend(find_seeds_scan(&phi, args.level, theta, args.t_max, RAY_SAMPLES));
        }
    }

    let mut arcs: Vec<LevelArc> = Vec::new();
    for seed in seeds {
        let seed = match seed {
            Ok(seed) => seed,
            Err(err) if explicit => return Err(numeric(err)),
            Err(_) => continue,
        };
        // A seed on a curve that is already traced adds nothing.
        let covered = arcs.iter().any(|arc| arc.points.iter().any(|p| (p - seed).norm() < 2.0 * args.step));
        if covered && !explicit {
            continue;
        }
        match trace_both(&phi, seed, args.level, &opts, &|_| false) {
            Ok(arc) => arcs.push(arc),
            Err(err) if explicit => return Err(numeric(err)),
            Err(_) => continue,
        }
    }
    if arcs.is_empty() {
        return Err(CliError::Numeric {
            name: "NoLevelCurve".into(),
            message: format!("no seed found for |Φ| = {} on any ray", args.level),
        });
    }
    for (i, arc) in arcs.iter().enumerate() {
        eprintln!(
            "arc {i}: {} points, {:?}, convexity {:?}, max residual {:.2e}",
            arc.len(),
            arc.termination,
            arc.certificate.status,
            arc.max_residual(&phi)
        );
    }
    let csv = if arcs.len() == 1 { arc_csv(&arcs[0], &phi) } else { arcs_csv(&arcs, &phi) };
    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.svg {
        let svg = arcs_svg(&arcs, &SvgOptions { unit_circle: !args.no_unit_circle, ..SvgOptions::default() });
        emit(Some(path), &svg)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct InflationSummary {
    r: f64,
    eps: f64,
    arc_points: usize,
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    symbol: String,
    /// The symbol the region refers to; differs from `symbol` when the arc
    /// was validated after a rotation.
    region_symbol: String,
    level: f64,
    candidates: usize,
    passes: usize,
    chosen_ray: Option<f64>,
    rotation: Option<String>,
    report: &'a CriterionReport,
    inflation: Option<InflationSummary>,
    witness_problem: Option<ProblemFile>,
}

pub fn pipeline_options(
    level: f64,
    rays: usize,
    m: Option<u32>,
    grid: usize,
    margin_floor: f64,
    step: f64,
) -> PipelineOptions {
    PipelineOptions {
        rays: even_rays(rays),
        level,
        m,
        scan: ScanOptions { grid: (grid, grid), margin_floor, step, ..ScanOptions::default() },
        inflate: InflateSearch { grid: (grid, grid), margin_floor, ..InflateSearch::default() },
    }
}

pub fn check(args: &CheckArgs) -> Result<(), CliError> {
    let phi = parse_symbol(&args.symbol)?;
    positive("level", args.level)?;
    positive("step", args.step)?;
    if args.rays == 0 || args.grid < 2 || args.m == 0 || args.p == 0 {
        return Err(CliError::Config("--rays, --m and --p must be at least 1 and --grid at least 2".into()));
    }
    let m = (!args.no_inflate).then_some(args.m);
    let opts = pipeline_options(args.level, args.rays, m, args.grid, args.margin_floor, args.step);
    let outcome = check_symbol(&phi, &opts);
    let problem = ProblemFile::from_outcome(&outcome, args.m, args.p);
    let output = check_output(&phi, &outcome, problem.clone());
    emit(args.out.as_deref(), &to_json(&output)?)?;
    if let (Some(path), Some(problem)) = (&args.problem_out, &problem) {
        emit(Some(path), &to_json(problem)?)?;
    }
    if let Some(path) = &args.svg {
        if let Some(svg) = outcome_svg(&outcome) {
            emit(Some(path), &svg)?;
        }
    }
    eprintln!(
        "{}: {} ({} candidates, {} passing)",
        args.symbol, outcome.report.verdict, outcome.candidates, outcome.passes
    );
    if args.strict && outcome.report.verdict != Verdict::Pass {
        return Err(CliError::Strict(format!("verdict is {}", outcome.report.verdict)));
    }
    Ok(())
}

fn check_output<'a>(
    phi: &Symbol,
    outcome: &'a PipelineOutcome,
    problem: Option<ProblemFile>,
) -> CheckOutput<'a> {
    CheckOutput {
        symbol: phi.to_string(),
        region_symbol: outcome.symbol.to_string(),
        level: outcome.report.level,
        candidates: outcome.candidates,
        passes: outcome.passes,
        chosen_ray: outcome.chosen.as_ref().map(|c| c.ray),
        rotation: outcome.chosen.as_ref().map(|c| format_complex(c.rotation)),
        report: &outcome.report,
        inflation: outcome.inflation.as_ref().map(|i| InflationSummary {
            r: i.r,
            eps: i.eps,
            arc_points: i.arc.len(),
        }),
        witness_problem: problem,
    }
}

/// The chosen arc with its hull, in the coordinates of `outcome.symbol`.
pub fn outcome_svg(outcome: &PipelineOutcome) -> Option<String> {
    let chosen = outcome.chosen.as_ref()?;
    let region = validate_arc(&chosen.arc.scaled(chosen.rotation.conj())).ok()?;
    let mut report = outcome.report.clone();
    report.violation_point = report.violation_point.map(|w| w * chosen.rotation.conj());
    Some(criterion_svg(&region, &report, &SvgOptions { unit_circle: false, ..SvgOptions::default() }))
}

#[derive(Serialize)]
struct WitnessSummary {
    q: u32,
    eps: f64,
    rho: f64,
    max_decay: f64,
    decay_rates: Vec<DecayRate>,
    last: WitnessStepSummary,
}

#[derive(Serialize)]
struct WitnessStepSummary {
    r_crude: f64,
    powers_crude: Vec<f64>,
    residual_crude: f64,
}

impl From<&WitnessStep> for WitnessStepSummary {
    fn from(step: &WitnessStep) -> Self {
        WitnessStepSummary {
            r_crude: step.r_norm.crude,
            powers_crude: step.powers.iter().map(|p| p.crude).collect(),
            residual_crude: step.residual.crude,
        }
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn witness(args: &WitnessArgs) -> Result<(), CliError> {
    positive("eps", args.eps)?;
    positive("rho", args.rho)?;
    let value = match (&args.problem, &args.from_report) {
        (Some(path), None) => read_json(path)?,
        (None, Some(path)) => {
            let report = read_json(path)?;
            match report.get("witness_problem") {
                Some(p) if !p.is_null() => p.clone(),
                _ => {
                    return Err(CliError::Config(format!(
                        "{}: report has no witness problem (no arc was inflated)",
                        path.display()
                    )))
                }
            }
        }
        _ => return Err(CliError::Config("give exactly one of --problem and --from-report".into())),
    };
    let file: ProblemFile = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
    let problem = WitnessProblem::from_file(&file).map_err(|e| match e {
        WitnessError::Invalid(msg) => CliError::Config(msg),
        other => numeric(other),
    })?;
    let (q, trace) = problem.find_q(args.eps, args.rho, args.q_max).map_err(numeric)?;
    emit(args.out.as_deref(), &witness_csv(&trace))?;
    let rates = problem.decay_rates();
    let max_decay = rates.iter().map(|d| d.factor).fold(0.0, f64::max);
    eprintln!("q = {q} (slowest decay factor {max_decay:.6})");
    if let Some(path) = &args.summary {
        let summary = WitnessSummary {
            q,
            eps: args.eps,
            rho: args.rho,
            max_decay,
            decay_rates: rates,
            last: trace.steps.last().expect("find_q returns at least one step").into(),
        };
        emit(Some(path), &to_json(&summary)?)?;
    }
    Ok(())
}

fn parse_disk(text: &str) -> Result<(C64, f64), CliError> {
    let bad = || CliError::Config(format!("disk `{text}` is not CENTER,RADIUS"));
    let (center, radius) = text.rsplit_once(',').ok_or_else(bad)?;
    let radius: f64 = radius.trim().parse().map_err(|_| bad())?;
    positive("disk radius", radius)?;
    Ok((parse_c(center.trim())?, radius))
}

pub fn zeros(args: &ZerosArgs) -> Result<(), CliError> {
    let f = parse_polynomial(&args.f)?;
    let weight = match &args.weight {
        Some(text) => ExpWeight::new(parse_polynomial(text)?),
        None => ExpWeight::one(),
    };
    let phi = AffineMap::new(parse_c(&args.scale)?, parse_c(&args.shift)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if args.power == 0 {
        return Err(CliError::Config("--power must be at least 1".into()));
    }
    let disks = args.disks.iter().map(|d| parse_disk(d)).collect::<Result<Vec<_>, _>>()?;
    let rows = orbit_power_zero_parity(&f, &weight, phi, args.power, args.n, &disks, args.n_quad)
        .map_err(numeric)?;
    emit(args.out.as_deref(), &parity_csv(&rows))?;
    if args.strict {
        if let Some(bad) = rows.iter().find(|r| !r.divisible) {
            return Err(CliError::Strict(format!(
                "count {} on D({}, {}) is not divisible by {}",
                bad.count,
                format_complex(bad.center),
                bad.radius,
                args.power
            )));
        }
    }
    Ok(())
}
