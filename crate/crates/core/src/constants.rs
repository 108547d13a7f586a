//! Exact constants of the lattice inequalities.
//!
//! Every constant here is a power of 2 times a rational power of the
//! dimension, so it is stored exactly as a pair of rational exponents
//! (`2^a * d^b`) and only converted to `f64` for display and for the
//! floating-point checks. The conversion happens once, in log2 space, which
//! keeps the approximation finite far beyond where a direct `2^a` would
//! overflow and makes the rounding behavior independent of `d` and `p`.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{BigUint, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which of the two term families a proof-chain term belongs to: those that
/// contain the first difference `D_1` and those that do not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    WithAxis1,
    WithoutAxis1,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::WithAxis1 => "with_d1",
            Branch::WithoutAxis1 => "without_d1",
        })
    }
}

/// A dimension `d >= 1` together with an admissible exponent
/// `1 <= p <= 2^(d-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantSpec {
    d: u32,
    p: u128,
}

impl ConstantSpec {
    pub fn new(d: u32, p: u128) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        // p ranges over {1, ..., 2^(d-1)}; the guard keeps the shift in
        // u128 range, and any d > 128 makes every u128 p admissible.
        let admissible = p >= 1 && (d > 128 || p <= 1u128 << (d - 1));
        if !admissible {
            return Err(Error::InvalidP { p, d });
        }
        Ok(Self { d, p })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> u128 {
        self.p
    }

    /// `log2(kappa) = d * 2^(d-1) - p`, exactly.
    pub fn kappa_log2(&self) -> BigInt {
        let d = BigInt::from(self.d);
        (d << (self.d - 1)) - BigInt::from(self.p)
    }

    /// The inequality constant `kappa = 2^(d * 2^(d-1) - p)`.
    pub fn kappa(&self) -> ConstantValue {
        ConstantValue::new(
            BigRational::from_integer(self.kappa_log2()),
            BigRational::zero(),
            self.d,
        )
    }

    /// The interpolation constant
    /// `mu = (kappa / d^(p/2))^(1 / 2^d)`
    ///    `= 2^((d * 2^(d-1) - p) / 2^d) * d^(-p / 2^(d+1))`.
    pub fn mu(&self) -> ConstantValue {
        let two_pow_d = BigInt::one() << self.d;
        let pow2 = BigRational::new(self.kappa_log2(), two_pow_d.clone());
        let dlog = BigRational::new(-BigInt::from(self.p), two_pow_d << 1);
        ConstantValue::new(pow2, dlog, self.d)
    }

    /// Exponent of the interpolated gradient factor, `p / 2^(d+1)`. The
    /// inequality raises the squared gradient norm to this power.
    pub fn gradient_exponent(&self) -> f64 {
        exponent_to_f64(&BigRational::new(
            BigInt::from(self.p),
            BigInt::one() << (self.d + 1),
        ))
    }

    /// Exponent of the l2 factor, `1 - p / 2^d`.
    pub fn l2_exponent(&self) -> f64 {
        exponent_to_f64(
            &(BigRational::one() - BigRational::new(BigInt::from(self.p), BigInt::one() << self.d)),
        )
    }
}

/// An exact constant of the form `2^pow2_exponent * d^d_log_coeff`, with a
/// cached `f64` approximation computed in log2 space. The approximation is
/// `+inf` when the true value exceeds `f64::MAX`; the exponents stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantValue {
    pow2_exponent: BigRational,
    d_log_coeff: BigRational,
    approx: f64,
}

impl ConstantValue {
    fn new(pow2_exponent: BigRational, d_log_coeff: BigRational, d: u32) -> Self {
        let log2 =
            exponent_to_f64(&pow2_exponent) + exponent_to_f64(&d_log_coeff) * (d as f64).log2();
        let approx = log2.exp2();
        Self {
            pow2_exponent,
            d_log_coeff,
            approx,
        }
    }

    /// Exact exponent of 2.
    pub fn pow2_exponent(&self) -> &BigRational {
        &self.pow2_exponent
    }

    /// Exact coefficient of `log2(d)` in the log2 of the value.
    pub fn d_log_coeff(&self) -> &BigRational {
        &self.d_log_coeff
    }

    /// Nearest `f64`, `+inf` on overflow.
    pub fn approx(&self) -> f64 {
        self.approx
    }
}

/// A `BigRational` exponent as `f64`. Exponents in this module are tiny
/// compared to `f64` range, but the numerator and denominator individually
/// can exceed it, so the quotient is taken with 96 extra bits of scale
/// before conversion.
fn exponent_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let scaled = (r.numer() << 96u32) / r.denom();
    let (sign, mag) = scaled.into_parts();
    let sign = if sign == Sign::Minus { -1.0 } else { 1.0 };
    // Top 64 bits of the magnitude carry full f64 precision.
    let bits = mag.bits();
    let (top, shift) = if bits > 64 {
        ((&mag >> (bits - 64)).to_u64().expect("64 bits"), bits - 64)
    } else {
        (mag.to_u64().expect("fits"), 0)
    };
    sign * top as f64 * (shift as f64 - 96.0).exp2()
}

/// Binomial coefficient `C(n, k)` by the multiplicative formula; exact at
/// every size.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of proof-chain terms of a given order in one branch: terms with
/// `D_1` have `C(d-1, i-1)` members of order `i`, terms without have
/// `C(d-1, i)` members of order `i`.
pub fn omega_count(d: u32, order: u32, branch: Branch) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let (lo, hi, shift) = match branch {
        Branch::WithAxis1 => (1u32, d, 1u32),
        Branch::WithoutAxis1 => (0u32, d - 1, 0u32),
    };
    if order < lo || order > hi {
        return Err(Error::OrderOutOfRange {
            order,
            d,
            branch: match branch {
                Branch::WithAxis1 => "with_d1",
                Branch::WithoutAxis1 => "without_d1",
            },
        });
    }
    Ok(binomial((d - 1) as u64, (order - shift) as u64))
}

/// Product of per-order reduction factors for the `D_1` branch, as the
/// exact exponent of 2:
/// `rho_1 = prod over i of 2^((i-1) * C(d-1, i-1))`, so the exponent is
/// `sum over i of (i-1) * C(d-1, i-1)`.
pub fn rho1_log2(d: u32) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut acc = BigInt::zero();
    for i in 1..=d {
        acc += BigInt::from(i - 1) * BigInt::from(omega_count(d, i, Branch::WithAxis1)?);
    }
    Ok(acc)
}

/// Same for the branch without `D_1`:
/// exponent `sum over i of i * C(d-1, i)`.
pub fn rho2_log2(d: u32) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut acc = BigInt::zero();
    for i in 0..d {
        acc += BigInt::from(i) * BigInt::from(omega_count(d, i, Branch::WithoutAxis1)?);
    }
    Ok(acc)
}

/// `log2` of the smallest constant reachable over all reduction plans,
/// `kappa_min = 2^((d-1) * 2^(d-1))`. Computed from its own formula, not
/// from `kappa_log2`, so the two can cross-check each other: the identity
/// `kappa_min = kappa at p = 2^(d-1)` must hold.
pub fn kappa_min_log2(d: u32) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(BigInt::from(d - 1) << (d - 1))
}

/// `rho1_log2` packaged as a value, for emission alongside kappa and mu.
pub fn rho1(d: u32) -> Result<ConstantValue> {
    Ok(ConstantValue::new(
        BigRational::from_integer(rho1_log2(d)?),
        BigRational::zero(),
        d,
    ))
}

/// `rho2_log2` packaged as a value.
pub fn rho2(d: u32) -> Result<ConstantValue> {
    Ok(ConstantValue::new(
        BigRational::from_integer(rho2_log2(d)?),
        BigRational::zero(),
        d,
    ))
}

/// `kappa_min_log2` packaged as a value. Equals `rho1 * rho2` and the kappa
/// of the largest admissible p.
pub fn kappa_min(d: u32) -> Result<ConstantValue> {
    Ok(ConstantValue::new(
        BigRational::from_integer(kappa_min_log2(d)?),
        BigRational::zero(),
        d,
    ))
}

/// The counting identity `n * 2^(n-1) = sum over k of k * C(n, k)` that ties
/// the total reduction cost to the constant's exponent.
pub fn binomial_identity_check(n: u32) -> bool {
    if n == 0 {
        return true;
    }
    let lhs = BigUint::from(n) << (n - 1);
    let mut rhs = BigUint::zero();
    for k in 0..=n as u64 {
        rhs += BigUint::from(k) * binomial(n as u64, k);
    }
    lhs == rhs
}

/// `log2(kappa)` of a `ConstantValue` holding a pure power of two, for
/// display. Returns `None` when the value has a `d`-dependent factor.
pub fn pure_pow2_exponent(v: &ConstantValue) -> Option<&BigRational> {
    if v.d_log_coeff().is_zero() {
        Some(v.pow2_exponent())
    } else {
        None
    }
}

/// Render a `BigRational` exponent as a short string, integer when exact.
pub fn exponent_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.denom().sign() == Sign::Minus {
        format!("{}/{}", -r.numer(), -r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: u32, p: u128) -> ConstantSpec {
        ConstantSpec::new(d, p).unwrap()
    }

    #[test]
    fn p_range_validation() {
        assert!(ConstantSpec::new(1, 1).is_ok());
        assert_eq!(
            ConstantSpec::new(1, 2).unwrap_err(),
            Error::InvalidP { p: 2, d: 1 }
        );
        assert_eq!(
            ConstantSpec::new(3, 0).unwrap_err(),
            Error::InvalidP { p: 0, d: 3 }
        );
        assert!(ConstantSpec::new(3, 4).is_ok());
        assert!(ConstantSpec::new(3, 5).is_err());
        assert_eq!(ConstantSpec::new(0, 1).unwrap_err(), Error::ZeroDimension);
        // Beyond d = 128 every positive p is admissible.
        assert!(ConstantSpec::new(129, u128::MAX).is_ok());
    }

    #[test]
    fn kappa_small_cases() {
        // d = 1: exponent 1 - p.
        assert_eq!(spec(1, 1).kappa_log2(), BigInt::from(0));
        // d = 2: exponent 4 - p.
        assert_eq!(spec(2, 1).kappa_log2(), BigInt::from(3));
        assert_eq!(spec(2, 2).kappa_log2(), BigInt::from(2));
        // d = 3: exponent 12 - p.
        assert_eq!(spec(3, 1).kappa_log2(), BigInt::from(11));
        assert_eq!(spec(3, 4).kappa_log2(), BigInt::from(8));
        assert_eq!(spec(3, 4).kappa().approx(), 256.0);
        assert_eq!(spec(1, 1).kappa().approx(), 1.0);
    }

    #[test]
    fn kappa_huge_dimension_exact_exponent() {
        // d = 200, p = 1: exponent 200 * 2^199 - 1, far beyond f64 but exact.
        let k = spec(200, 1).kappa();
        let expected = (BigInt::from(200) << 199u32) - 1;
        assert_eq!(k.pow2_exponent(), &BigRational::from_integer(expected));
        assert!(k.approx().is_infinite());
    }

    #[test]
    fn mu_exponents_d2_p1() {
        // mu = 2^(3/4) * 2^(-1/8 * log2 2) = 2^(3/4 - 1/8) = 2^(5/8).
        let m = spec(2, 1).mu();
        assert_eq!(
            m.pow2_exponent(),
            &BigRational::new(BigInt::from(3), BigInt::from(4))
        );
        assert_eq!(
            m.d_log_coeff(),
            &BigRational::new(BigInt::from(-1), BigInt::from(8))
        );
        let expected = (0.75f64 - 0.125).exp2();
        assert!((m.approx() - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn mu_d1_is_one() {
        // d = 1, p = 1: mu = (kappa / 1)^(1/2) = 1, so the main inequality
        // specializes to the classical 1-D bound with constant 1.
        let m = spec(1, 1).mu();
        assert_eq!(
            m.pow2_exponent(),
            &BigRational::from_integer(BigInt::zero())
        );
        assert_eq!(m.approx(), 1.0);
    }

    #[test]
    fn mu_matches_direct_formula_small() {
        for d in 1..=6u32 {
            for p in 1..=(1u128 << (d - 1)) {
                let s = spec(d, p);
                let kappa_f = s.kappa().approx();
                if !kappa_f.is_finite() {
                    continue;
                }
                let direct =
                    (kappa_f / (d as f64).powf(p as f64 / 2.0)).powf(1.0 / (1u64 << d) as f64);
                let m = s.mu().approx();
                assert!(
                    (m - direct).abs() <= 1e-12 * direct,
                    "d={d} p={p}: {m} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn interpolation_exponents_balance() {
        // The inequality is linf <= mu * (grad_sq)^a * l2^b; both sides are
        // degree-1 homogeneous, so 2a + b = 1 (grad_sq is quadratic).
        for d in 1..=5u32 {
            for p in 1..=(1u128 << (d - 1)) {
                let s = spec(d, p);
                let total = 2.0 * s.gradient_exponent() + s.l2_exponent();
                assert!((total - 1.0).abs() < 1e-15, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(10, 10), BigUint::one());
        assert_eq!(binomial(4, 7), BigUint::zero());
        // C(64, 32) overflows u64 arithmetic done naively; exact here.
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn omega_counts_d3() {
        // d = 3, branch with D_1: orders 1..3 count C(2, 0..2) = 1, 2, 1.
        let counts: Vec<u32> = (1..=3)
            .map(|i| {
                omega_count(3, i, Branch::WithAxis1)
                    .unwrap()
                    .to_u32()
                    .unwrap()
            })
            .collect();
        assert_eq!(counts, [1, 2, 1]);
        // Branch without D_1: orders 0..2 count the same row of Pascal.
        let counts: Vec<u32> = (0..=2)
            .map(|i| {
                omega_count(3, i, Branch::WithoutAxis1)
                    .unwrap()
                    .to_u32()
                    .unwrap()
            })
            .collect();
        assert_eq!(counts, [1, 2, 1]);
        assert!(omega_count(3, 0, Branch::WithAxis1).is_err());
        assert!(omega_count(3, 4, Branch::WithAxis1).is_err());
        assert!(omega_count(3, 3, Branch::WithoutAxis1).is_err());
        assert!(omega_count(0, 0, Branch::WithoutAxis1).is_err());
    }

    #[test]
    fn branch_totals_are_2_pow_d_minus_1() {
        for d in 1..=10u32 {
            for branch in [Branch::WithAxis1, Branch::WithoutAxis1] {
                let (lo, hi) = match branch {
                    Branch::WithAxis1 => (1, d),
                    Branch::WithoutAxis1 => (0, d - 1),
                };
                let total: BigUint = (lo..=hi).map(|i| omega_count(d, i, branch).unwrap()).sum();
                assert_eq!(total, BigUint::one() << (d - 1), "d={d} {branch}");
            }
        }
    }

    #[test]
    fn rho_products_agree() {
        // Both branch products equal 2^((d-1) * 2^(d-2)) for d >= 2, and in
        // particular each other.
        for d in 1..=16u32 {
            let r1 = rho1_log2(d).unwrap();
            let r2 = rho2_log2(d).unwrap();
            assert_eq!(r1, r2, "d={d}");
            if d >= 2 {
                let expected = BigInt::from(d - 1) << (d - 2);
                assert_eq!(r1, expected, "d={d}");
            } else {
                assert_eq!(r1, BigInt::zero());
            }
        }
    }

    #[test]
    fn kappa_min_is_kappa_at_largest_p() {
        for d in 1..=16u32 {
            let p_max = 1u128 << (d - 1);
            assert_eq!(
                kappa_min_log2(d).unwrap(),
                spec(d, p_max).kappa_log2(),
                "d={d}"
            );
        }
    }

    #[test]
    fn kappa_min_is_product_of_rhos() {
        for d in 1..=12u32 {
            let product = rho1_log2(d).unwrap() + rho2_log2(d).unwrap();
            assert_eq!(kappa_min_log2(d).unwrap(), product, "d={d}");
        }
        assert_eq!(kappa_min(2).unwrap().approx(), 4.0);
        assert_eq!(kappa_min(3).unwrap().approx(), 256.0);
        assert_eq!(kappa_min(1).unwrap().approx(), 1.0);
        assert_eq!(rho1(2).unwrap().approx(), 2.0);
        assert_eq!(rho2(3).unwrap().approx(), 16.0);
    }

    #[test]
    fn binomial_identity_holds() {
        for n in 0..=40u32 {
            assert!(binomial_identity_check(n), "n={n}");
        }
    }

    #[test]
    fn exponent_strings() {
        assert_eq!(
            exponent_string(&BigRational::from_integer(BigInt::from(7))),
            "7"
        );
        assert_eq!(
            exponent_string(&BigRational::new(BigInt::from(-1), BigInt::from(8))),
            "-1/8"
        );
    }

    #[test]
    fn exponent_conversion_handles_huge_ratios() {
        // Numerator alone overflows f64; the quotient is exactly 3.
        let big = BigInt::one() << 2000u32;
        let r = BigRational::new(&big * 3, big);
        assert_eq!(exponent_to_f64(&r), 3.0);
        let r = BigRational::new(BigInt::from(-5), BigInt::from(4));
        assert_eq!(exponent_to_f64(&r), -1.25);
    }
}
