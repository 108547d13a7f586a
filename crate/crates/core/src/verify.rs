//! Inequality certification: evaluate both sides of each lattice inequality
//! on concrete sequences and drive randomized soundness suites.
//!
//! Every checker returns a [`CheckReport`] with the raw sides, their ratio,
//! and a verdict under a relative tolerance. The tolerance exists to absorb
//! rounding in the floating-point evaluation of mathematically true
//! inequalities; a report that fails at the default tolerance indicates an
//! implementation bug, not a counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::constants::ConstantSpec;
use crate::error::{Error, Result};
use crate::lattice::{centered_box, LatticePoint, LatticeSeq, SupportBox};
use crate::sum::CompensatedSum;

/// Relative slack for all floating-point inequality checks. Sized to absorb
/// compensated-summation rounding on boxes up to ~10^6 points without
/// masking a genuine violation.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Absolute floor added to the right side so that 0 <= 0 comparisons are
/// immune to sign-of-zero noise.
const ABSOLUTE_FLOOR: f64 = 1e-300;

/// Outcome of one inequality evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, defined as 0 when both sides are 0.
    pub ratio: f64,
    pub satisfied: bool,
    pub tolerance: f64,
}

impl CheckReport {
    fn from_sides(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
            satisfied: side_holds(lhs, rhs, tolerance),
            tolerance,
        }
    }
}

fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

fn side_holds(lhs: f64, rhs: f64, tolerance: f64) -> bool {
    lhs <= rhs * (1.0 + tolerance) + ABSOLUTE_FLOOR
}

/// The 1-D sup-norm bound `linf^2 <= l2 * l2(D phi)`.
pub fn check_agmon_1d(seq: &LatticeSeq, tolerance: f64) -> Result<CheckReport> {
    if seq.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: seq.dim(),
        });
    }
    let lhs = seq.linf_norm().powi(2);
    let rhs = seq.l2_norm() * seq.partial_difference(1)?.l2_norm();
    Ok(CheckReport::from_sides(lhs, rhs, tolerance))
}

/// Result of the bracket-interpolation check, which quantifies over the
/// trailing coordinates: the report is taken at the point with the largest
/// left side, and that point is returned alongside it.
#[derive(Clone, Debug, PartialEq)]
pub struct AgmonCauchyReport {
    pub check: CheckReport,
    /// Trailing coordinates (axes k+2 ..= d) where the left side peaks;
    /// empty when k = d - 1.
    pub worst_point: LatticePoint,
}

/// The bracket interpolation step: for each point of the trailing
/// coordinates, the sup over the (k+1)-st coordinate of the k-th bracket is
/// bounded by the geometric mean of the (k+1)-st brackets of `D_{k+1} phi`
/// and of `phi`. Satisfied only if the bound holds at every trailing point;
/// the reported sides belong to the first point maximizing the left side.
pub fn check_agmon_cauchy(seq: &LatticeSeq, k: usize, tolerance: f64) -> Result<AgmonCauchyReport> {
    let d = seq.dim();
    if d == 0 || k >= d {
        return Err(Error::BracketOutOfRange { k, d });
    }
    let bk = seq.bracket(k)?;
    let bk1 = seq.bracket(k + 1)?;
    let dbk1 = seq.partial_difference(k + 1)?.bracket(k + 1)?;
    // The difference enlarges the box along axis k+1 only, which the
    // (k+1)-bracket sums away, so both depth-(k+1) brackets share the
    // trailing box; outside it every side is zero and the bound is vacuous.
    debug_assert_eq!(bk1.support(), dbk1.support());
    let trailing_vol = bk1.support().volume();
    // bk is stored row-major with axis k+1 outermost, so fixing a trailing
    // flat index and stepping the first axis strides by trailing_vol.
    let first_extent = bk.support().shape()[0];
    let mut all_hold = true;
    let mut worst_idx = 0usize;
    let mut worst = (f64::NEG_INFINITY, 0.0);
    for t in 0..trailing_vol {
        let mut sup = 0.0f64;
        for a in 0..first_extent {
            sup = sup.max(bk.values()[a * trailing_vol + t]);
        }
        let rhs = dbk1.values()[t].sqrt() * bk1.values()[t].sqrt();
        all_hold &= side_holds(sup, rhs, tolerance);
        if sup > worst.0 {
            worst = (sup, rhs);
            worst_idx = t;
        }
    }
    let (lhs, rhs) = worst;
    Ok(AgmonCauchyReport {
        check: CheckReport {
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
            satisfied: all_hold,
            tolerance,
        },
        worst_point: bk1.support().point_at(worst_idx),
    })
}

/// The per-axis difference bound `l2(D_i phi) <= 2 * l2(phi)`.
pub fn check_diff_bound(seq: &LatticeSeq, axis: usize, tolerance: f64) -> Result<CheckReport> {
    let lhs = seq.partial_difference(axis)?.l2_norm();
    let rhs = 2.0 * seq.l2_norm();
    Ok(CheckReport::from_sides(lhs, rhs, tolerance))
}

/// Both sides of the main interpolation inequality:
/// `linf <= mu * grad_sq^(p / 2^(d+1)) * l2^(1 - p / 2^d)`.
/// Shared by the checker and by the extremal search objective.
pub fn main_sides(seq: &LatticeSeq, spec: &ConstantSpec) -> Result<(f64, f64)> {
    if seq.dim() != spec.d() as usize {
        return Err(Error::DimensionMismatch {
            expected: spec.d() as usize,
            got: seq.dim(),
        });
    }
    if seq.is_zero() {
        return Ok((0.0, 0.0));
    }
    let lhs = seq.linf_norm();
    let rhs = spec.mu().approx()
        * seq.gradient_sq_norm()?.powf(spec.gradient_exponent())
        * seq.l2_norm().powf(spec.l2_exponent());
    Ok((lhs, rhs))
}

/// The main inequality on an arbitrary-dimension sequence.
pub fn check_main(seq: &LatticeSeq, p: u128, tolerance: f64) -> Result<CheckReport> {
    if seq.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    let spec = ConstantSpec::new(seq.dim() as u32, p)?;
    let (lhs, rhs) = main_sides(seq, &spec)?;
    Ok(CheckReport::from_sides(lhs, rhs, tolerance))
}

/// Whether the second-difference bound runs over the whole axis or is
/// restricted to nonnegative indices. The half-axis variant carries
/// constant 2 instead of 1 and requires the sequence to live on the
/// nonnegative half-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopsonMode {
    WholeAxis,
    HalfAxis,
}

/// Squared l2 norm over nonnegative indices only, in index order.
fn half_line_norm_sq(seq: &LatticeSeq) -> f64 {
    let offset = seq.support().offset()[0];
    let mut acc = CompensatedSum::new();
    for (i, &v) in seq.values().iter().enumerate() {
        if offset + i as i64 >= 0 {
            acc.add(v * v);
        }
    }
    acc.value()
}

/// The second-difference bound `l2(D phi)^2 <= C * l2(phi) * l2(D D phi)`
/// on 1-D sequences, with C = 1 on the whole axis and C = 2 on the
/// half-axis (all three norms then restricted to indices >= 0).
pub fn check_copson(seq: &LatticeSeq, mode: CopsonMode, tolerance: f64) -> Result<CheckReport> {
    if seq.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: seq.dim(),
        });
    }
    let d1 = seq.partial_difference(1)?;
    let d2 = d1.partial_difference(1)?;
    let (lhs, rhs) = match mode {
        CopsonMode::WholeAxis => (d1.l2_norm_sq(), seq.l2_norm() * d2.l2_norm()),
        CopsonMode::HalfAxis => {
            let offset = seq.support().offset()[0];
            for (i, &v) in seq.values().iter().enumerate() {
                let idx = offset + i as i64;
                if idx < 0 && v != 0.0 {
                    return Err(Error::SupportBelowZero { index: idx });
                }
            }
            (
                half_line_norm_sq(&d1),
                2.0 * half_line_norm_sq(seq).sqrt() * half_line_norm_sq(&d2).sqrt(),
            )
        }
    };
    Ok(CheckReport::from_sides(lhs, rhs, tolerance))
}

/// Value distribution for randomized trials: uniform on [-1, 1), unit
/// gaussian, or sparse (unit gaussian at 10% density) to exercise
/// cancellation, smoothness, and near-delta regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    UniformSigned,
    Gaussian,
    Sparse,
}

impl Distribution {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Distribution::UniformSigned => rng.random_range(-1.0..1.0),
            Distribution::Gaussian => rng.sample(StandardNormal),
            Distribution::Sparse => {
                if rng.random::<f64>() < 0.1 {
                    rng.sample(StandardNormal)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Which inequality a suite exercises. The bracket and per-axis checks
/// quantify internally: one trial covers every k, respectively every axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequalityKind {
    Agmon1d,
    AgmonCauchy,
    DiffBound,
    Main,
    CopsonWhole,
    CopsonHalf,
}

impl InequalityKind {
    pub fn name(&self) -> &'static str {
        match self {
            InequalityKind::Agmon1d => "agmon1d",
            InequalityKind::AgmonCauchy => "agmon-cauchy",
            InequalityKind::DiffBound => "diff-bound",
            InequalityKind::Main => "main",
            InequalityKind::CopsonWhole => "copson-whole",
            InequalityKind::CopsonHalf => "copson-half",
        }
    }
}

impl std::str::FromStr for InequalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "agmon1d" => InequalityKind::Agmon1d,
            "agmon-cauchy" => InequalityKind::AgmonCauchy,
            "diff-bound" => InequalityKind::DiffBound,
            "main" => InequalityKind::Main,
            "copson-whole" => InequalityKind::CopsonWhole,
            "copson-half" => InequalityKind::CopsonHalf,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown inequality {other:?}; expected one of agmon1d, \
                     agmon-cauchy, diff-bound, main, copson-whole, copson-half"
                )))
            }
        })
    }
}

/// Configuration of a randomized suite. `p` only constrains the main
/// inequality; other kinds carry it through to the summary unchecked.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub d: usize,
    pub p: u128,
    pub count: u64,
    pub box_shape: Vec<usize>,
    pub seed: u64,
    pub distribution: Distribution,
    pub tolerance: f64,
}

/// Outcome of a randomized suite over one inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub inequality: InequalityKind,
    pub d: usize,
    pub p: u128,
    pub trials: u64,
    /// Indices of failing trials, in trial order; empty on a sound run.
    pub failures: Vec<u64>,
    /// Largest ratio across all trials (first trial wins ties).
    pub worst_ratio: f64,
    /// Seed that reproduces the worst trial as trial 0 of a count-1 suite.
    pub worst_trial_seed: u64,
    pub tolerance: f64,
}

/// The box a suite draws sequences on: anchored at 0 for the half-axis
/// inequality, centered on the origin otherwise.
fn suite_box(cfg: &SuiteConfig, which: InequalityKind) -> Result<SupportBox> {
    if which == InequalityKind::CopsonHalf {
        SupportBox::new(vec![0; cfg.box_shape.len()], cfg.box_shape.clone())
    } else {
        centered_box(&cfg.box_shape)
    }
}

fn validate_suite(cfg: &SuiteConfig, which: InequalityKind) -> Result<()> {
    if cfg.count == 0 {
        return Err(Error::InvalidConfig("count must be at least 1".into()));
    }
    if cfg.d == 0 {
        return Err(Error::ZeroDimension);
    }
    if cfg.box_shape.len() != cfg.d {
        return Err(Error::DimensionMismatch {
            expected: cfg.d,
            got: cfg.box_shape.len(),
        });
    }
    match which {
        InequalityKind::Agmon1d | InequalityKind::CopsonWhole | InequalityKind::CopsonHalf => {
            if cfg.d != 1 {
                return Err(Error::InvalidConfig(format!(
                    "{} is a 1-D inequality, got d = {}",
                    which.name(),
                    cfg.d
                )));
            }
        }
        InequalityKind::Main => {
            ConstantSpec::new(cfg.d as u32, cfg.p)?;
        }
        InequalityKind::AgmonCauchy | InequalityKind::DiffBound => {}
    }
    Ok(())
}

/// One trial's verdict: whether every checked instance held, and the
/// largest ratio among them.
fn run_trial(
    seq: &LatticeSeq,
    which: InequalityKind,
    p: u128,
    tolerance: f64,
) -> Result<(bool, f64)> {
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut absorb = |r: CheckReport| {
        ok &= r.satisfied;
        if r.ratio > worst {
            worst = r.ratio;
        }
    };
    match which {
        InequalityKind::Agmon1d => absorb(check_agmon_1d(seq, tolerance)?),
        InequalityKind::AgmonCauchy => {
            for k in 0..seq.dim() {
                absorb(check_agmon_cauchy(seq, k, tolerance)?.check);
            }
        }
        InequalityKind::DiffBound => {
            for axis in 1..=seq.dim() {
                absorb(check_diff_bound(seq, axis, tolerance)?);
            }
        }
        InequalityKind::Main => absorb(check_main(seq, p, tolerance)?),
        InequalityKind::CopsonWhole => absorb(check_copson(seq, CopsonMode::WholeAxis, tolerance)?),
        InequalityKind::CopsonHalf => absorb(check_copson(seq, CopsonMode::HalfAxis, tolerance)?),
    }
    Ok((ok, worst))
}

/// A suite sequence: the trial's own RNG stream fills the box, so trial t
/// of any suite equals trial 0 of the same suite reseeded with seed + t.
fn trial_sequence(support: &SupportBox, dist: Distribution, trial_seed: u64) -> LatticeSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let values = (0..support.volume())
        .map(|_| dist.sample(&mut rng))
        .collect();
    LatticeSeq::new(support.dim(), support.clone(), values).expect("shape matches volume")
}

/// Runs `cfg.count` independent random trials of one inequality. Trials
/// evaluate in parallel but reduce in trial order, so the summary is
/// identical to a sequential run with the same seed.
pub fn run_suite(cfg: &SuiteConfig, which: InequalityKind) -> Result<SuiteSummary> {
    validate_suite(cfg, which)?;
    let support = suite_box(cfg, which)?;
    let outcomes: Vec<(bool, f64)> = (0..cfg.count)
        .into_par_iter()
        .map(|t| {
            let seq = trial_sequence(&support, cfg.distribution, cfg.seed.wrapping_add(t));
            run_trial(&seq, which, cfg.p, cfg.tolerance)
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut worst_idx = 0u64;
    let mut worst_ratio = f64::NEG_INFINITY;
    for (t, &(ok, ratio)) in outcomes.iter().enumerate() {
        if !ok {
            failures.push(t as u64);
        }
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_idx = t as u64;
        }
    }
    Ok(SuiteSummary {
        inequality: which,
        d: cfg.d,
        p: cfg.p,
        trials: cfg.count,
        failures,
        worst_ratio,
        worst_trial_seed: cfg.seed.wrapping_add(worst_idx),
        tolerance: cfg.tolerance,
    })
}
