//! Randomized invariants of the lattice operations and the inequality
//! checkers. Structural identities (commutativity, linearity) run on
//! integer-valued sequences where double arithmetic is exact; analytic
//! bounds run on arbitrary real values under the standard tolerance.

use proptest::prelude::*;

use agmon_core::{
    check_agmon_1d, check_agmon_cauchy, check_copson, check_diff_bound, check_main, ratio,
    CopsonMode, LatticeSeq, SupportBox, DEFAULT_TOLERANCE,
};

const TOL: f64 = DEFAULT_TOLERANCE;

/// A dimension, box, and value list with real entries.
fn real_seq(max_d: usize) -> impl Strategy<Value = LatticeSeq> {
    (1..=max_d)
        .prop_flat_map(|d| {
            (
                proptest::collection::vec(1usize..=6, d),
                proptest::collection::vec(-4i64..=4, d),
            )
        })
        .prop_flat_map(|(shape, offset)| {
            let volume = shape.iter().product::<usize>();
            (
                Just(shape),
                Just(offset),
                proptest::collection::vec(-10.0f64..10.0, volume),
            )
        })
        .prop_map(|(shape, offset, values)| {
            let d = shape.len();
            LatticeSeq::new(d, SupportBox::new(offset, shape).unwrap(), values).unwrap()
        })
}

/// Same shape distribution with small-integer values, where every
/// difference and linear combination is exact in doubles.
fn int_seq(max_d: usize) -> impl Strategy<Value = LatticeSeq> {
    real_seq(max_d).prop_map(|seq| {
        let values = seq.values().iter().map(|v| v.round()).collect();
        LatticeSeq::new(seq.dim(), seq.support().clone(), values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_bracket_equals_l2_norm(seq in real_seq(3)) {
        let b = seq.bracket(seq.dim()).unwrap();
        prop_assert_eq!(b.dim(), 0);
        // Same summation order, so bitwise equality, not just closeness.
        prop_assert_eq!(b.values()[0].to_bits(), seq.l2_norm().to_bits());
    }

    #[test]
    fn differences_commute_exactly_on_integers(seq in int_seq(3)) {
        let d = seq.dim();
        for i in 1..=d {
            for j in (i + 1)..=d {
                let ij = seq
                    .partial_difference(i).unwrap()
                    .partial_difference(j).unwrap();
                let ji = seq
                    .partial_difference(j).unwrap()
                    .partial_difference(i).unwrap();
                prop_assert_eq!(&ij, &ji, "axes {} {}", i, j);
            }
        }
    }

    #[test]
    fn difference_is_linear_on_integers(
        x in int_seq(2),
        y_values in proptest::collection::vec(-10.0f64..10.0, 1..=36),
        a in -3i64..=3,
        b in -3i64..=3,
    ) {
        // Give y the dimension of x with an arbitrary aligned box.
        let d = x.dim();
        let shape: Vec<usize> = match d {
            1 => vec![y_values.len()],
            _ => {
                let side = (y_values.len() as f64).sqrt().floor() as usize;
                vec![side.max(1); 2]
            }
        };
        let volume: usize = shape.iter().product();
        let values: Vec<f64> = y_values[..volume].iter().map(|v| v.round()).collect();
        let y = LatticeSeq::new(d, SupportBox::new(vec![0; d], shape).unwrap(), values).unwrap();

        let combo = LatticeSeq::linear_combination(a as f64, &x, b as f64, &y).unwrap();
        for axis in 1..=d {
            let left = combo.partial_difference(axis).unwrap();
            let right = LatticeSeq::linear_combination(
                a as f64,
                &x.partial_difference(axis).unwrap(),
                b as f64,
                &y.partial_difference(axis).unwrap(),
            )
            .unwrap();
            // Boxes can differ (union vs difference enlargement), so compare
            // pointwise over the larger box.
            for idx in 0..right.support().volume() {
                let p = right.support().point_at(idx);
                prop_assert_eq!(
                    left.value_at(&p).unwrap(),
                    right.value_at(&p).unwrap(),
                    "axis {}",
                    axis
                );
            }
            for idx in 0..left.support().volume() {
                let p = left.support().point_at(idx);
                prop_assert_eq!(left.value_at(&p).unwrap(), right.value_at(&p).unwrap());
            }
        }
    }

    #[test]
    fn difference_support_grows_down_by_one(seq in real_seq(3)) {
        for axis in 1..=seq.dim() {
            let diff = seq.partial_difference(axis).unwrap();
            let din = diff.support();
            let sin = seq.support();
            for i in 0..seq.dim() {
                let grow = if i + 1 == axis { 1 } else { 0 };
                prop_assert_eq!(din.offset()[i], sin.offset()[i] - grow);
                prop_assert_eq!(din.shape()[i], sin.shape()[i] + grow as usize);
            }
        }
    }

    #[test]
    fn norms_are_scale_homogeneous(seq in real_seq(3), c in -1e3f64..1e3) {
        let scaled = seq.scaled(c);
        let expect_l2 = c.abs() * seq.l2_norm();
        let expect_linf = c.abs() * seq.linf_norm();
        prop_assert!((scaled.l2_norm() - expect_l2).abs() <= 1e-12 * expect_l2.max(1e-30));
        prop_assert!((scaled.linf_norm() - expect_linf).abs() <= 1e-12 * expect_linf.max(1e-30));
    }

    #[test]
    fn checkers_are_sound_on_random_input(seq in real_seq(3)) {
        let d = seq.dim();
        if d == 1 {
            prop_assert!(check_agmon_1d(&seq, TOL).unwrap().satisfied);
            prop_assert!(check_copson(&seq, CopsonMode::WholeAxis, TOL).unwrap().satisfied);
        }
        for k in 0..d {
            prop_assert!(check_agmon_cauchy(&seq, k, TOL).unwrap().check.satisfied, "k={}", k);
        }
        for axis in 1..=d {
            prop_assert!(check_diff_bound(&seq, axis, TOL).unwrap().satisfied, "axis={}", axis);
        }
        for p in 1..=(1u128 << (d - 1)) {
            let r = check_main(&seq, p, TOL).unwrap();
            prop_assert!(r.satisfied, "p={} ratio={}", p, r.ratio);
            prop_assert!(r.ratio <= 1.0 + TOL);
        }
    }

    #[test]
    fn copson_half_axis_sound_on_nonnegative_support(
        values in proptest::collection::vec(-10.0f64..10.0, 1..=40),
        start in 0i64..=5,
    ) {
        let seq = LatticeSeq::line(start, values);
        prop_assert!(check_copson(&seq, CopsonMode::HalfAxis, TOL).unwrap().satisfied);
    }

    #[test]
    fn bracket_reduction_matches_1d_checker(values in proptest::collection::vec(-10.0f64..10.0, 1..=32)) {
        let seq = LatticeSeq::line(-3, values);
        let flat = check_agmon_1d(&seq, TOL).unwrap();
        let nested = check_agmon_cauchy(&seq, 0, TOL).unwrap().check;
        // The bracket form carries unsquared sides; squaring must recover
        // the 1-D checker up to a few ulps from the sqrt split.
        prop_assert_eq!((nested.lhs * nested.lhs).to_bits(), flat.lhs.to_bits());
        prop_assert!(
            (nested.rhs * nested.rhs - flat.rhs).abs() <= 1e-15 * flat.rhs.max(1e-300)
        );
    }

    #[test]
    fn check_ratios_survive_rescaling(seq in real_seq(2), c in prop::sample::select(vec![1e-6f64, 1e6])) {
        if seq.is_zero() {
            return Ok(());
        }
        let scaled = seq.scaled(c);
        let base = check_main(&seq, 1, TOL).unwrap().ratio;
        let moved = check_main(&scaled, 1, TOL).unwrap().ratio;
        prop_assert!((moved - base).abs() <= 1e-10 * base.abs().max(1e-30));
    }

    #[test]
    fn reports_are_translation_invariant(seq in real_seq(3), shift in proptest::collection::vec(-50i64..=50, 3)) {
        let d = seq.dim();
        let moved = seq.translated(&shift[..d]).unwrap();
        for axis in 1..=d {
            prop_assert_eq!(
                check_diff_bound(&seq, axis, TOL).unwrap(),
                check_diff_bound(&moved, axis, TOL).unwrap()
            );
        }
        prop_assert_eq!(
            check_main(&seq, 1, TOL).unwrap(),
            check_main(&moved, 1, TOL).unwrap()
        );
        for k in 0..d {
            prop_assert_eq!(
                check_agmon_cauchy(&seq, k, TOL).unwrap().check,
                check_agmon_cauchy(&moved, k, TOL).unwrap().check
            );
        }
    }

    #[test]
    fn search_objective_matches_main_checker(seq in real_seq(2)) {
        if seq.is_zero() {
            return Ok(());
        }
        let r = ratio(&seq, 1).unwrap();
        let report = check_main(&seq, 1, TOL).unwrap();
        prop_assert_eq!(r.to_bits(), report.ratio.to_bits());
        prop_assert!(r <= 1.0 + TOL);
    }
}
