//! Mechanical replay of the combinatorial bookkeeping behind the main
//! inequality's constant.
//!
//! The chained Cauchy-Schwarz argument expands the sup norm into a product
//! over 2^d mixed-difference norms, one per subset of axes: terms carrying
//! the first-axis difference form one branch, terms without it the other.
//! Each term is then reduced either to `||D_1 phi||` or to `||phi||`, and
//! every eliminated difference operator costs a factor of 2. Summing those
//! costs over any admissible reduction plan must reproduce the closed-form
//! exponent `d * 2^(d-1) - p`, which is what this module re-derives and
//! checks term by term, independently of the formula in `constants`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::bigint::BigInt;
use num::{BigUint, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{binomial, Branch, ConstantSpec};
use crate::error::{Error, Result};

/// Enumeration cap: 2^20 terms. Above this, histograms come straight from
/// binomial coefficients instead of term lists.
pub const MAX_TRACE_DIM: u32 = 20;

/// A set of axis indices in 1..=MAX_TRACE_DIM, stored as a bitmask with bit
/// `j - 1` standing for axis `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisSet(u32);

impl AxisSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn contains(&self, axis: u32) -> bool {
        (1..=32).contains(&axis) && self.0 & (1 << (axis - 1)) != 0
    }

    pub fn with(self, axis: u32) -> Self {
        Self(self.0 | 1 << (axis - 1))
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Member axes in ascending order.
    pub fn axes(&self) -> Vec<u32> {
        (1..=32).filter(|&a| self.contains(a)).collect()
    }
}

/// One norm term of the expansion: its branch and the axes of its mixed
/// difference operator. The order of the term is the number of axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofTerm {
    branch: Branch,
    axes: AxisSet,
}

impl ProofTerm {
    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn axes(&self) -> AxisSet {
        self.axes
    }

    /// Number of difference operators the term carries.
    pub fn order(&self) -> u32 {
        self.axes.len()
    }
}

impl std::fmt::Display for ProofTerm {
    /// Operator notation with highest axis applied last, e.g. `D2D1`; the
    /// empty set is the identity, written `1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.axes.is_empty() {
            return f.write_str("1");
        }
        for a in self.axes.axes().into_iter().rev() {
            write!(f, "D{a}")?;
        }
        Ok(())
    }
}

fn check_trace_dim(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d > MAX_TRACE_DIM {
        return Err(Error::DimensionCap {
            d,
            max: MAX_TRACE_DIM,
        });
    }
    Ok(())
}

/// Subsets of {2, ..., d} in lexicographic order (as sorted axis lists):
/// {}, {2}, {2,3}, ..., {d}. Pre-order walk over the inclusion tree.
fn subsets_of_tail(d: u32) -> Vec<AxisSet> {
    fn rec(cur: AxisSet, next: u32, d: u32, out: &mut Vec<AxisSet>) {
        out.push(cur);
        for j in next..=d {
            rec(cur.with(j), j + 1, d, out);
        }
    }
    let mut out = Vec::with_capacity(1usize << (d - 1));
    rec(AxisSet::empty(), 2, d, &mut out);
    out
}

/// The full 2^d-term expansion: one term per subset S of {2, ..., d} and
/// per branch, with the first branch carrying {1} plus S and the second
/// carrying S alone. The first-branch block comes first; within each block
/// terms follow the lexicographic subset order, so traces are
/// byte-comparable across runs.
pub fn expand_chain(d: u32) -> Result<Vec<ProofTerm>> {
    check_trace_dim(d)?;
    let tails = subsets_of_tail(d);
    let mut terms = Vec::with_capacity(tails.len() * 2);
    for &s in &tails {
        terms.push(ProofTerm {
            branch: Branch::WithAxis1,
            axes: s.with(1),
        });
    }
    for &s in &tails {
        terms.push(ProofTerm {
            branch: Branch::WithoutAxis1,
            axes: s,
        });
    }
    Ok(terms)
}

/// Counts of terms per order within one branch.
pub fn order_histogram(terms: &[ProofTerm], branch: Branch) -> BTreeMap<u32, u64> {
    let mut hist = BTreeMap::new();
    for t in terms.iter().filter(|t| t.branch == branch) {
        *hist.entry(t.order()).or_insert(0u64) += 1;
    }
    hist
}

/// What a term is reduced to: the single first-axis difference norm or the
/// plain sequence norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionTarget {
    FirstDiff,
    Plain,
}

/// Exponent of 2 paid to reduce a term to its target: each eliminated
/// difference operator costs one factor of 2, and reducing to the first
/// difference keeps one operator alive.
pub fn reduction_cost(term: &ProofTerm, target: ReductionTarget) -> Result<u32> {
    match (term.branch, target) {
        (Branch::WithAxis1, ReductionTarget::FirstDiff) => Ok(term.order() - 1),
        (Branch::WithoutAxis1, ReductionTarget::FirstDiff) => Err(Error::PlainTermToFirstDiff),
        (_, ReductionTarget::Plain) => Ok(term.order()),
    }
}

/// A choice of which p terms of the first branch are reduced to
/// `||D_1 phi||`; everything else reduces to `||phi||`. `chosen` holds
/// 0-based positions within the first-branch block of `expand_chain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    d: u32,
    p: u128,
    chosen: BTreeSet<usize>,
}

impl ReductionPlan {
    pub fn new(d: u32, p: u128, chosen: BTreeSet<usize>) -> Result<Self> {
        ConstantSpec::new(d, p)?;
        check_trace_dim(d)?;
        let branch_size = 1usize << (d - 1);
        if chosen.len() as u128 != p {
            return Err(Error::InvalidPlan(format!(
                "plan keeps {} terms, p = {p} required",
                chosen.len()
            )));
        }
        if let Some(&max) = chosen.iter().next_back() {
            if max >= branch_size {
                return Err(Error::InvalidPlan(format!(
                    "term index {max} outside branch of size {branch_size}"
                )));
            }
        }
        Ok(Self { d, p, chosen })
    }

    /// The first p terms of the branch.
    pub fn canonical(d: u32, p: u128) -> Result<Self> {
        ConstantSpec::new(d, p)?;
        check_trace_dim(d)?;
        Self::new(d, p, (0..p as usize).collect())
    }

    /// A uniformly random admissible plan.
    pub fn sampled(d: u32, p: u128, rng: &mut impl Rng) -> Result<Self> {
        ConstantSpec::new(d, p)?;
        check_trace_dim(d)?;
        let branch_size = 1usize << (d - 1);
        let chosen = rand::seq::index::sample(rng, branch_size, p as usize)
            .into_iter()
            .collect();
        Self::new(d, p, chosen)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> u128 {
        self.p
    }

    pub fn chosen(&self) -> &BTreeSet<usize> {
        &self.chosen
    }
}

/// Total reduction cost over all 2^d terms under a plan, as the exponent
/// of 2. Every admissible plan yields `d * 2^(d-1) - p`; agreement with
/// `kappa_log2` is the independent re-derivation of the constant.
pub fn total_kappa(d: u32, p: u128, plan: &ReductionPlan) -> Result<BigInt> {
    if plan.d != d || plan.p != p {
        return Err(Error::InvalidPlan(format!(
            "plan built for (d={}, p={}), asked for (d={d}, p={p})",
            plan.d, plan.p
        )));
    }
    let terms = expand_chain(d)?;
    let branch_size = terms.len() / 2;
    let mut total = BigInt::zero();
    for (i, term) in terms.iter().enumerate() {
        let target = if i < branch_size && plan.chosen.contains(&i) {
            ReductionTarget::FirstDiff
        } else {
            ReductionTarget::Plain
        };
        total += BigInt::from(reduction_cost(term, target)?);
    }
    Ok(total)
}

/// Checks that the orders over both branches sum to `d * 2^(d-1)`, the
/// counting identity that collapses the per-term costs into the closed
/// form. Enumerates terms up to the cap, then switches to binomial sums.
pub fn verify_sum_identity(d: u32) -> Result<bool> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let total: BigUint = if d <= MAX_TRACE_DIM {
        expand_chain(d)?
            .iter()
            .map(|t| BigUint::from(t.order()))
            .sum()
    } else {
        // sum over i of i * (C(d-1, i-1) + C(d-1, i))
        let n = (d - 1) as u64;
        let mut acc = BigUint::zero();
        for i in 1..=d as u64 {
            acc += BigUint::from(i) * binomial(n, i - 1);
            if i <= n {
                acc += BigUint::from(i) * binomial(n, i);
            }
        }
        acc
    };
    Ok(total == BigUint::from(d) << (d - 1))
}

/// Number of admissible plans, `C(2^(d-1), p)`.
pub fn plan_count(d: u32, p: u128) -> Result<BigUint> {
    ConstantSpec::new(d, p)?;
    check_trace_dim(d)?;
    Ok(binomial(1u64 << (d - 1), p as u64))
}

/// Every admissible plan. Call only when `plan_count` is small.
pub fn all_plans(d: u32, p: u128) -> Result<Vec<ReductionPlan>> {
    ConstantSpec::new(d, p)?;
    check_trace_dim(d)?;
    let branch_size = 1usize << (d - 1);
    (0..branch_size)
        .combinations(p as usize)
        .map(|c| ReductionPlan::new(d, p, c.into_iter().collect()))
        .collect()
}

/// `n` independently seeded random plans; plan i draws from the stream
/// seeded with `seed + i`, so samples are reproducible individually.
pub fn sample_plans(d: u32, p: u128, n: u64, seed: u64) -> Result<Vec<ReductionPlan>> {
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            ReductionPlan::sampled(d, p, &mut rng)
        })
        .collect()
}
