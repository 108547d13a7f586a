//! Empirical sharpness probing: maximize the main-inequality ratio over
//! finitely supported sequences on a fixed box.
//!
//! The objective R(phi) = lhs/rhs of the main inequality is scale invariant
//! and bounded by 1, so the search walks the unit l2 sphere of the box with
//! multi-start random coordinate ascent. Results are empirical lower bounds
//! on the best possible constant; nothing here certifies sharpness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::constants::ConstantSpec;
use crate::error::{Error, Result};
use crate::lattice::{centered_box, LatticeSeq, SupportBox};
use crate::verify::main_sides;

/// Number of consecutive rejected proposals before the step halves.
const DECAY_PATIENCE: u32 = 50;
/// Steps never decay below this, so late iterations still move.
const STEP_FLOOR: f64 = 1e-10;

/// Budget and geometry of one search run.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub d: usize,
    pub p: u128,
    pub box_shape: Vec<usize>,
    pub restarts: u64,
    pub iters: u64,
    pub step_init: f64,
    pub seed: u64,
}

/// Outcome of a search: the best ratio over all restarts, the achieving
/// unit-norm sequence, and each restart's own best for comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best_ratio: f64,
    pub best_seq: LatticeSeq,
    /// Best ratio per restart, indexed by restart number.
    pub history: Vec<f64>,
    pub seed: u64,
}

/// The main-inequality ratio R(phi) = lhs/rhs, the search objective. The
/// zero sequence has no ratio; any nonzero finitely supported sequence has
/// a positive gradient norm, so the denominator never vanishes.
pub fn ratio(seq: &LatticeSeq, p: u128) -> Result<f64> {
    if seq.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    if seq.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let spec = ConstantSpec::new(seq.dim() as u32, p)?;
    let (lhs, rhs) = main_sides(seq, &spec)?;
    Ok(lhs / rhs)
}

/// One ascent proposal: perturb a uniformly chosen entry by a gaussian step
/// and renormalize to the unit sphere. Exactly one index draw and one
/// gaussian draw per call, so the RNG stream advances identically whether
/// or not the proposal is later accepted. A proposal that cancels the
/// sequence to zero is returned unchanged (it will never be accepted).
pub fn local_step(seq: &LatticeSeq, step: f64, rng: &mut impl Rng) -> LatticeSeq {
    let idx = rng.random_range(0..seq.values().len());
    let g: f64 = rng.sample(StandardNormal);
    let mut values = seq.values().to_vec();
    values[idx] += step * g;
    let cand =
        LatticeSeq::new(seq.dim(), seq.support().clone(), values).expect("same box, same length");
    match cand.normalized() {
        Ok(unit) => unit,
        Err(_) => seq.clone(),
    }
}

/// The impulse at the box's center point, on the full box.
fn centered_delta(support: &SupportBox) -> Result<LatticeSeq> {
    let center: Vec<i64> = support
        .offset()
        .iter()
        .zip(support.shape())
        .map(|(&o, &s)| o + ((s - 1) / 2) as i64)
        .collect();
    LatticeSeq::delta(&center).embedded_in(support)
}

/// A discretized gaussian bump centered on the box, width a sixth of each
/// extent, normalized to unit l2.
fn centered_bump(support: &SupportBox) -> Result<LatticeSeq> {
    let center: Vec<f64> = support
        .offset()
        .iter()
        .zip(support.shape())
        .map(|(&o, &s)| o as f64 + (s - 1) as f64 / 2.0)
        .collect();
    let sigma: Vec<f64> = support
        .shape()
        .iter()
        .map(|&s| (s as f64 / 6.0).max(0.5))
        .collect();
    let values = (0..support.volume())
        .map(|idx| {
            let p = support.point_at(idx);
            let q: f64 = p
                .iter()
                .zip(&center)
                .zip(&sigma)
                .map(|((&c, &m), &s)| {
                    let z = (c as f64 - m) / s;
                    z * z
                })
                .sum();
            (-q / 2.0).exp()
        })
        .collect();
    LatticeSeq::new(support.dim(), support.clone(), values)?.normalized()
}

/// A random unit vector on the box, drawn from the given stream.
fn random_unit(support: &SupportBox, rng: &mut impl Rng) -> LatticeSeq {
    loop {
        let values: Vec<f64> = (0..support.volume())
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let seq =
            LatticeSeq::new(support.dim(), support.clone(), values).expect("shape matches volume");
        if let Ok(unit) = seq.normalized() {
            return unit;
        }
    }
}

/// Start point for a restart: the centered delta, then the centered bump,
/// then random unit vectors, so the two natural extremal-candidate shapes
/// are always explored first.
fn start_point(restart: u64, support: &SupportBox, rng: &mut impl Rng) -> Result<LatticeSeq> {
    match restart {
        0 => centered_delta(support),
        1 => centered_bump(support),
        _ => Ok(random_unit(support, rng)),
    }
}

fn validate(cfg: &SearchConfig) -> Result<()> {
    ConstantSpec::new(cfg.d as u32, cfg.p).map_err(|e| {
        if cfg.d == 0 {
            Error::ZeroDimension
        } else {
            e
        }
    })?;
    if cfg.box_shape.len() != cfg.d {
        return Err(Error::DimensionMismatch {
            expected: cfg.d,
            got: cfg.box_shape.len(),
        });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    if cfg.iters == 0 {
        return Err(Error::InvalidConfig("iters must be at least 1".into()));
    }
    if !(cfg.step_init > 0.0 && cfg.step_init.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "step_init must be a positive finite number, got {}",
            cfg.step_init
        )));
    }
    Ok(())
}

fn run_restart(
    cfg: &SearchConfig,
    support: &SupportBox,
    restart: u64,
) -> Result<(f64, LatticeSeq)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart));
    let mut cur = start_point(restart, support, &mut rng)?;
    let mut cur_ratio = ratio(&cur, cfg.p)?;
    let mut step = cfg.step_init;
    let mut rejects = 0u32;
    for _ in 0..cfg.iters {
        let cand = local_step(&cur, step, &mut rng);
        let accept = match ratio(&cand, cfg.p) {
            Ok(r) if r > cur_ratio => {
                cur = cand;
                cur_ratio = r;
                true
            }
            _ => false,
        };
        if accept {
            rejects = 0;
        } else {
            rejects += 1;
            if rejects >= DECAY_PATIENCE {
                step = (step * 0.5).max(STEP_FLOOR);
                rejects = 0;
            }
        }
    }
    Ok((cur_ratio, cur))
}

/// Multi-start coordinate ascent over the centered box. Restarts run in
/// parallel on streams seeded by `seed + restart`, so parallel and
/// sequential runs return identical results; the winner among restarts is
/// the highest ratio, ties to the lowest restart index.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    validate(cfg)?;
    let support = centered_box(&cfg.box_shape)?;
    let outcomes: Vec<(f64, LatticeSeq)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(cfg, &support, r))
        .collect::<Result<_>>()?;
    let history: Vec<f64> = outcomes.iter().map(|(r, _)| *r).collect();
    let mut best = 0usize;
    for (i, &r) in history.iter().enumerate() {
        if r > history[best] {
            best = i;
        }
    }
    Ok(SearchResult {
        best_ratio: history[best],
        best_seq: outcomes[best].1.clone(),
        history,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_1d() -> SearchConfig {
        SearchConfig {
            d: 1,
            p: 1,
            box_shape: vec![15],
            restarts: 4,
            iters: 400,
            step_init: 0.25,
            seed: 11,
        }
    }

    #[test]
    fn ratio_of_delta_hand_values() {
        let delta = LatticeSeq::delta(&[0]);
        let r = ratio(&delta, 1).unwrap();
        assert!((r - 2.0f64.powf(-0.25)).abs() < 1e-12);

        let delta2 = LatticeSeq::delta(&[0, 0]);
        let r = ratio(&delta2, 2).unwrap();
        assert!((r - 2.0f64.powf(-0.75)).abs() < 1e-12);
    }

    #[test]
    fn ratio_is_scale_invariant() {
        let seq = LatticeSeq::line(0, vec![0.5, -1.0, 2.0]);
        let base = ratio(&seq, 1).unwrap();
        for c in [1e-6, 1e6] {
            let r = ratio(&seq.scaled(c), 1).unwrap();
            assert!((r - base).abs() <= 1e-12 * base, "c={c}");
        }
    }

    #[test]
    fn ratio_rejects_degenerate_input() {
        let zero = LatticeSeq::line(0, vec![0.0, 0.0]);
        assert_eq!(ratio(&zero, 1).unwrap_err(), Error::ZeroSequence);
        assert_eq!(
            ratio(&LatticeSeq::scalar(1.0), 1).unwrap_err(),
            Error::ZeroDimension
        );
        let seq = LatticeSeq::line(0, vec![1.0]);
        assert_eq!(ratio(&seq, 2).unwrap_err(), Error::InvalidP { p: 2, d: 1 });
    }

    #[test]
    fn local_step_zero_step_is_identity_on_unit_input() {
        let delta = LatticeSeq::delta(&[0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = local_step(&delta, 0.0, &mut rng);
        assert_eq!(out, delta);
    }

    #[test]
    fn local_step_keeps_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cur = LatticeSeq::line(0, vec![1.0, 2.0, -1.0])
            .normalized()
            .unwrap();
        for _ in 0..200 {
            cur = local_step(&cur, 0.3, &mut rng);
            assert!((cur.l2_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ascent_trace_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut cur = centered_delta(&centered_box(&[21]).unwrap()).unwrap();
        let mut cur_ratio = ratio(&cur, 1).unwrap();
        let mut step = 0.25;
        let mut rejects = 0;
        for _ in 0..2000 {
            let cand = local_step(&cur, step, &mut rng);
            let r = ratio(&cand, 1).unwrap();
            if r > cur_ratio {
                cur = cand;
                cur_ratio = r;
                rejects = 0;
            } else {
                rejects += 1;
                if rejects >= 50 {
                    let next = (step * 0.5).max(1e-10);
                    assert!(next <= step);
                    step = next;
                    rejects = 0;
                }
            }
        }
        assert!(cur_ratio >= 2.0f64.powf(-0.25));
    }

    #[test]
    fn search_is_deterministic() {
        let a = search(&cfg_1d()).unwrap();
        let b = search(&cfg_1d()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn search_dominates_delta_and_respects_bound() {
        let result = search(&cfg_1d()).unwrap();
        let delta_ratio = 2.0f64.powf(-0.25);
        assert!(result.best_ratio >= delta_ratio);
        assert!(result.best_ratio <= 1.0 + 1e-9);
        assert!((result.best_seq.l2_norm() - 1.0).abs() < 1e-12);
        assert_eq!(result.history.len(), 4);
        // Restart 0 starts from the delta, so its own best dominates it too.
        assert!(result.history[0] >= delta_ratio);
    }

    #[test]
    fn search_2d_improves_on_delta() {
        let cfg = SearchConfig {
            d: 2,
            p: 2,
            box_shape: vec![9, 9],
            restarts: 2,
            iters: 300,
            step_init: 0.25,
            seed: 1,
        };
        let result = search(&cfg).unwrap();
        assert!(result.best_ratio >= 2.0f64.powf(-0.75));
        assert!(result.best_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn embedding_in_larger_box_preserves_ratio() {
        let result = search(&SearchConfig {
            box_shape: vec![9],
            ..cfg_1d()
        })
        .unwrap();
        let bigger = centered_box(&[15]).unwrap();
        let embedded = result.best_seq.embedded_in(&bigger).unwrap();
        let r = ratio(&embedded, 1).unwrap();
        assert!((r - result.best_ratio).abs() <= 1e-12);
    }

    #[test]
    fn search_config_validation() {
        let mut cfg = cfg_1d();
        cfg.restarts = 0;
        assert!(matches!(search(&cfg).unwrap_err(), Error::InvalidConfig(_)));
        let mut cfg = cfg_1d();
        cfg.iters = 0;
        assert!(search(&cfg).is_err());
        let mut cfg = cfg_1d();
        cfg.step_init = -1.0;
        assert!(search(&cfg).is_err());
        let mut cfg = cfg_1d();
        cfg.p = 9;
        assert_eq!(search(&cfg).unwrap_err(), Error::InvalidP { p: 9, d: 1 });
        let mut cfg = cfg_1d();
        cfg.box_shape = vec![5, 5];
        assert!(search(&cfg).is_err());
    }
}
