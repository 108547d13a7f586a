//! `agmon verify`: certify one inequality, either on a sequence file or on
//! a randomized suite.
//!
//! File mode evaluates every instance the inequality quantifies over (each
//! bracket level k, each axis) and exits 0 only if all of them hold. Random
//! mode runs seeded independent trials; any failing trial index makes the
//! run exit 1, and the summary carries a seed that replays the worst trial
//! as trial 0 of a count-1 suite.

use std::path::PathBuf;

use agmon_core::{
    check_agmon_1d, check_agmon_cauchy, check_copson, check_diff_bound, check_main, json_u128,
    run_suite, seq_from_json, CheckReport, CopsonMode, Distribution, InequalityKind, Json,
    LatticePoint, SuiteConfig, SuiteSummary,
};

use crate::emit::{float_cell, print_json, Format};
use crate::UsageError;

/// Failing trial indices are truncated to this many in the report; the
/// exact count is always present.
const MAX_REPORTED_FAILURES: usize = 100;

pub struct Args {
    pub format: Format,
    pub tolerance: f64,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub random: bool,
    pub inequality: InequalityKind,
    pub d: Option<usize>,
    pub p: Option<u128>,
    pub count: u64,
    pub box_extent: usize,
    pub distribution: Distribution,
}

pub fn parse_inequality(s: &str) -> Result<InequalityKind, String> {
    s.parse().map_err(|e: agmon_core::Error| e.to_string())
}

pub fn parse_distribution(s: &str) -> Result<Distribution, String> {
    match s {
        "uniform" => Ok(Distribution::UniformSigned),
        "gaussian" => Ok(Distribution::Gaussian),
        "sparse" => Ok(Distribution::Sparse),
        other => Err(format!(
            "unknown distribution {other:?}; expected uniform, gaussian, or sparse"
        )),
    }
}

fn distribution_name(dist: Distribution) -> &'static str {
    match dist {
        Distribution::UniformSigned => "uniform",
        Distribution::Gaussian => "gaussian",
        Distribution::Sparse => "sparse",
    }
}

/// The p to evaluate under: mandatory for the main inequality, inert
/// elsewhere (suites carry it through to the summary unchecked).
fn effective_p(args: &Args) -> Result<u128, UsageError> {
    match args.p {
        Some(p) => Ok(p),
        None if args.inequality == InequalityKind::Main => Err(UsageError(
            "the main inequality needs --p (1 <= p <= 2^(d-1))".into(),
        )),
        None => Ok(1),
    }
}

pub fn run(args: Args) -> Result<i32, UsageError> {
    match (&args.input, args.random) {
        (Some(path), false) => run_file(&args, path.clone()),
        (None, true) => run_random(&args),
        (None, false) => Err(UsageError("pass --input FILE or --random".into())),
        (Some(_), true) => unreachable!("clap rejects --input with --random"),
    }
}

/// One evaluated instance: the quantifier position it covers and, for the
/// bracket check, the trailing point where the left side peaked.
struct LabeledCheck {
    label: String,
    report: CheckReport,
    worst_point: Option<LatticePoint>,
}

fn run_file(args: &Args, path: PathBuf) -> Result<i32, UsageError> {
    let text = std::fs::read_to_string(&path)?;
    let seq = seq_from_json(&text)?;
    let d = seq.dim();
    let tol = args.tolerance;

    let mut checks = Vec::new();
    match args.inequality {
        InequalityKind::Agmon1d => checks.push(LabeledCheck {
            label: "agmon1d".into(),
            report: check_agmon_1d(&seq, tol)?,
            worst_point: None,
        }),
        InequalityKind::AgmonCauchy => {
            for k in 0..d {
                let r = check_agmon_cauchy(&seq, k, tol)?;
                checks.push(LabeledCheck {
                    label: format!("k={k}"),
                    report: r.check,
                    worst_point: Some(r.worst_point),
                });
            }
        }
        InequalityKind::DiffBound => {
            for axis in 1..=d {
                checks.push(LabeledCheck {
                    label: format!("axis={axis}"),
                    report: check_diff_bound(&seq, axis, tol)?,
                    worst_point: None,
                });
            }
        }
        InequalityKind::Main => {
            let p = effective_p(args)?;
            checks.push(LabeledCheck {
                label: format!("p={p}"),
                report: check_main(&seq, p, tol)?,
                worst_point: None,
            });
        }
        InequalityKind::CopsonWhole => checks.push(LabeledCheck {
            label: "whole-axis".into(),
            report: check_copson(&seq, CopsonMode::WholeAxis, tol)?,
            worst_point: None,
        }),
        InequalityKind::CopsonHalf => checks.push(LabeledCheck {
            label: "half-axis".into(),
            report: check_copson(&seq, CopsonMode::HalfAxis, tol)?,
            worst_point: None,
        }),
    }

    let satisfied = checks.iter().all(|c| c.report.satisfied);
    match args.format {
        Format::Json => {
            let doc = Json::Obj(vec![
                ("mode".into(), Json::Str("file".into())),
                (
                    "inequality".into(),
                    Json::Str(args.inequality.name().into()),
                ),
                ("input".into(), Json::Str(path.display().to_string())),
                ("d".into(), Json::Int(d as i128)),
                ("tolerance".into(), Json::Float(tol)),
                (
                    "checks".into(),
                    Json::Arr(checks.iter().map(check_json).collect()),
                ),
                ("satisfied".into(), Json::Bool(satisfied)),
            ]);
            print_json(&doc);
        }
        Format::Table => {
            println!(
                "inequality {} on {} (d = {d})",
                args.inequality.name(),
                path.display()
            );
            for c in &checks {
                let verdict = if c.report.satisfied { "ok" } else { "FAIL" };
                let point = c.worst_point.as_ref().map_or(String::new(), |pt| {
                    format!("  at {:?}", pt.iter().collect::<Vec<_>>())
                });
                println!(
                    "  {:<12} lhs {}  rhs {}  ratio {}  {verdict}{point}",
                    c.label,
                    float_cell(c.report.lhs),
                    float_cell(c.report.rhs),
                    float_cell(c.report.ratio),
                );
            }
            println!("result: {}", if satisfied { "PASS" } else { "FAIL" });
        }
    }
    Ok(if satisfied { 0 } else { 1 })
}

fn check_json(c: &LabeledCheck) -> Json {
    let mut obj = vec![
        ("label".into(), Json::Str(c.label.clone())),
        ("lhs".into(), Json::Float(c.report.lhs)),
        ("rhs".into(), Json::Float(c.report.rhs)),
        ("ratio".into(), Json::Float(c.report.ratio)),
        ("satisfied".into(), Json::Bool(c.report.satisfied)),
    ];
    if let Some(pt) = &c.worst_point {
        obj.push((
            "worst_point".into(),
            Json::Arr(pt.iter().map(|&x| Json::Int(x as i128)).collect()),
        ));
    }
    Json::Obj(obj)
}

fn run_random(args: &Args) -> Result<i32, UsageError> {
    let d = match args.d {
        Some(d) => d,
        // The 1-D inequalities fix their own dimension.
        None => match args.inequality {
            InequalityKind::Agmon1d | InequalityKind::CopsonWhole | InequalityKind::CopsonHalf => 1,
            _ => return Err(UsageError("--random needs --d".into())),
        },
    };
    let cfg = SuiteConfig {
        d,
        p: effective_p(args)?,
        count: args.count,
        box_shape: vec![args.box_extent; d],
        seed: args.seed,
        distribution: args.distribution,
        tolerance: args.tolerance,
    };
    let summary = run_suite(&cfg, args.inequality)?;
    let passed = summary.failures.is_empty();

    match args.format {
        Format::Json => print_json(&summary_json(&cfg, &summary)),
        Format::Table => {
            println!(
                "inequality {} random suite: d = {}, {} trials, {} distribution, box extent {}",
                summary.inequality.name(),
                summary.d,
                summary.trials,
                distribution_name(cfg.distribution),
                args.box_extent,
            );
            println!(
                "  failures {}  worst ratio {}  worst trial seed {}",
                summary.failures.len(),
                float_cell(summary.worst_ratio),
                summary.worst_trial_seed,
            );
            if !passed {
                let shown: Vec<u64> = summary
                    .failures
                    .iter()
                    .take(MAX_REPORTED_FAILURES)
                    .copied()
                    .collect();
                println!("  failing trials (first {}): {:?}", shown.len(), shown);
            }
            println!("result: {}", if passed { "PASS" } else { "FAIL" });
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn summary_json(cfg: &SuiteConfig, summary: &SuiteSummary) -> Json {
    let failures: Vec<Json> = summary
        .failures
        .iter()
        .take(MAX_REPORTED_FAILURES)
        .map(|&t| json_u128(t as u128))
        .collect();
    Json::Obj(vec![
        ("mode".into(), Json::Str("random".into())),
        (
            "inequality".into(),
            Json::Str(summary.inequality.name().into()),
        ),
        ("d".into(), Json::Int(summary.d as i128)),
        ("p".into(), json_u128(summary.p)),
        ("trials".into(), json_u128(summary.trials as u128)),
        (
            "failure_count".into(),
            json_u128(summary.failures.len() as u128),
        ),
        ("failures".into(), Json::Arr(failures)),
        ("worst_ratio".into(), Json::Float(summary.worst_ratio)),
        (
            "worst_trial_seed".into(),
            json_u128(summary.worst_trial_seed as u128),
        ),
        ("tolerance".into(), Json::Float(summary.tolerance)),
        (
            "distribution".into(),
            Json::Str(distribution_name(cfg.distribution).into()),
        ),
        (
            "box".into(),
            Json::Arr(
                cfg.box_shape
                    .iter()
                    .map(|&s| Json::Int(s as i128))
                    .collect(),
            ),
        ),
        ("seed".into(), json_u128(cfg.seed as u128)),
    ])
}
