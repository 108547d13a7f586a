//! Deterministic fixtures for the benchmark suite. Values come from an
//! integer hash, so every run measures the same sequences without pulling
//! a RNG dependency into this crate.

use agmon_core::{centered_box, LatticeSeq};

/// SplitMix64 finalizer; statistically flat enough for fixture data.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// A dense sequence on the centered box of the given shape, with values in
/// [-1, 1) derived from `salt` and the flat index.
pub fn dense_seq(shape: &[usize], salt: u64) -> LatticeSeq {
    let support = centered_box(shape).expect("benchmark shapes are nonempty");
    let values = (0..support.volume())
        .map(|i| (mix(salt ^ i as u64) >> 11) as f64 / (1u64 << 52) as f64 - 1.0)
        .collect();
    LatticeSeq::new(shape.len(), support, values).expect("volume matches")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic_and_nonzero() {
        let a = dense_seq(&[32, 32], 7);
        let b = dense_seq(&[32, 32], 7);
        assert_eq!(a.values(), b.values());
        assert!(a.l2_norm() > 0.0);
        assert!(a.values().iter().all(|v| (-1.0..1.0).contains(v)));
        let c = dense_seq(&[32, 32], 8);
        assert_ne!(a.values(), c.values());
    }
}
