//! Finitely supported real sequences on the d-dimensional integer lattice.
//!
//! A [`LatticeSeq`] stores a dense row-major block of values over a
//! [`SupportBox`] and is implicitly zero everywhere else. On that
//! representation every norm, inner product, and difference operator is an
//! exact finite computation. Axes are 1-based throughout the public API,
//! matching the usual `D_1, ..., D_d` naming of the partial difference
//! operators. All values are immutable after construction; every operation
//! returns a new sequence, so sequences are safe to share across threads.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// A point of the integer lattice, `zeta = (zeta_1, ..., zeta_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Deref for LatticePoint {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        Self(coords)
    }
}

/// An axis-aligned box of lattice points: minimal corner plus per-axis extent.
///
/// The degenerate zero-dimensional box (no axes, volume 1) indexes the single
/// value of a scalar sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportBox {
    offset: Vec<i64>,
    shape: Vec<usize>,
}

impl SupportBox {
    pub fn new(offset: Vec<i64>, shape: Vec<usize>) -> Result<Self> {
        if offset.len() != shape.len() {
            return Err(Error::BoxLengthMismatch {
                offset_len: offset.len(),
                shape_len: shape.len(),
            });
        }
        for (i, &s) in shape.iter().enumerate() {
            if s == 0 {
                return Err(Error::EmptyAxis { axis: i + 1 });
            }
        }
        Ok(Self { offset, shape })
    }

    /// The zero-dimensional box.
    pub fn scalar() -> Self {
        Self {
            offset: Vec::new(),
            shape: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn offset(&self) -> &[i64] {
        &self.offset
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Number of lattice points in the box (1 for the scalar box).
    pub fn volume(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(&self.offset)
                .zip(&self.shape)
                .all(|((&c, &o), &s)| c >= o && c < o + s as i64)
    }

    pub fn contains_box(&self, other: &SupportBox) -> bool {
        self.dim() == other.dim()
            && self
                .offset
                .iter()
                .zip(&self.shape)
                .zip(other.offset.iter().zip(&other.shape))
                .all(|((&o, &s), (&oo, &os))| oo >= o && oo + os as i64 <= o + s as i64)
    }

    /// Row-major strides, last axis fastest.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dim()];
        for i in (0..self.dim().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.shape[i + 1];
        }
        strides
    }

    /// Flat index of `p` in row-major order, or `None` outside the box.
    pub fn flat_index(&self, p: &[i64]) -> Option<usize> {
        if p.len() != self.dim() {
            return None;
        }
        let mut idx = 0usize;
        for (i, &coord) in p.iter().enumerate() {
            let c = coord - self.offset[i];
            if c < 0 || c >= self.shape[i] as i64 {
                return None;
            }
            idx = idx * self.shape[i] + c as usize;
        }
        Some(idx)
    }

    /// The lattice point at a flat index.
    pub fn point_at(&self, mut idx: usize) -> LatticePoint {
        let mut coords = vec![0i64; self.dim()];
        for i in (0..self.dim()).rev() {
            coords[i] = self.offset[i] + (idx % self.shape[i]) as i64;
            idx /= self.shape[i];
        }
        LatticePoint(coords)
    }

    /// The box grown by one step in the negative direction of `axis0`
    /// (0-based). This is where a forward difference picks up support.
    fn enlarged_down(&self, axis0: usize) -> SupportBox {
        let mut offset = self.offset.clone();
        let mut shape = self.shape.clone();
        offset[axis0] -= 1;
        shape[axis0] += 1;
        SupportBox { offset, shape }
    }

    fn translated(&self, shift: &[i64]) -> Result<SupportBox> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: shift.len(),
            });
        }
        let offset = self
            .offset
            .iter()
            .zip(shift)
            .map(|(&o, &s)| o + s)
            .collect();
        Ok(SupportBox {
            offset,
            shape: self.shape.clone(),
        })
    }
}

/// The box of a given shape whose lower-median corner sits so that the
/// origin is the (floor) center point.
pub fn centered_box(shape: &[usize]) -> Result<SupportBox> {
    let offset = shape
        .iter()
        .map(|&s| -((s.saturating_sub(1) / 2) as i64))
        .collect();
    SupportBox::new(offset, shape.to_vec())
}

/// A finitely supported sequence on `Z^d`: dense values over a box, zero
/// outside. `d = 0` is admitted and represents a single scalar, which is what
/// the bracket operator returns when it sums over every coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSeq {
    d: usize,
    support: SupportBox,
    values: Vec<f64>,
}

impl LatticeSeq {
    /// Build a sequence, validating that the box matches the dimension and
    /// the value count matches the box volume.
    pub fn new(d: usize, support: SupportBox, values: Vec<f64>) -> Result<Self> {
        if support.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: support.dim(),
            });
        }
        if values.len() != support.volume() {
            return Err(Error::ValueCountMismatch {
                expected: support.volume(),
                got: values.len(),
            });
        }
        Ok(Self { d, support, values })
    }

    /// The zero-dimensional scalar sequence.
    pub fn scalar(value: f64) -> Self {
        Self {
            d: 0,
            support: SupportBox::scalar(),
            values: vec![value],
        }
    }

    pub fn zeros(support: SupportBox) -> Self {
        let values = vec![0.0; support.volume()];
        Self {
            d: support.dim(),
            support,
            values,
        }
    }

    /// The unit impulse at `at`, on the smallest possible box.
    pub fn delta(at: &[i64]) -> Self {
        let support = SupportBox {
            offset: at.to_vec(),
            shape: vec![1; at.len()],
        };
        Self {
            d: at.len(),
            support,
            values: vec![1.0],
        }
    }

    /// Convenience constructor for a 1-D sequence starting at `start`.
    pub fn line(start: i64, values: Vec<f64>) -> Self {
        let support = SupportBox {
            offset: vec![start],
            shape: vec![values.len().max(1)],
        };
        let values = if values.is_empty() { vec![0.0] } else { values };
        Self {
            d: 1,
            support,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn support(&self) -> &SupportBox {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// The value at `p`: the stored entry inside the box, exactly 0 outside.
    pub fn value_at(&self, p: &[i64]) -> Result<f64> {
        if p.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: p.len(),
            });
        }
        Ok(match self.support.flat_index(p) {
            Some(i) => self.values[i],
            None => 0.0,
        })
    }

    /// Squared l2 norm, compensated, summed in row-major index order.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &v in &self.values {
            acc.add(v * v);
        }
        acc.value()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Sup norm: max of |value| over the support, 0 for the zero sequence.
    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Inner product over the lattice. Finite support makes the sum exact
    /// over the box intersection; disjoint supports give 0.
    pub fn inner_product(&self, other: &LatticeSeq) -> Result<f64> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        // Intersection of the two boxes.
        let mut lo = vec![0i64; self.d];
        let mut hi = vec![0i64; self.d];
        for i in 0..self.d {
            lo[i] = self.support.offset[i].max(other.support.offset[i]);
            hi[i] = (self.support.offset[i] + self.support.shape[i] as i64)
                .min(other.support.offset[i] + other.support.shape[i] as i64);
            if lo[i] >= hi[i] {
                return Ok(0.0);
            }
        }
        let shape: Vec<usize> = (0..self.d).map(|i| (hi[i] - lo[i]) as usize).collect();
        let volume: usize = shape.iter().product();
        let mut acc = CompensatedSum::new();
        let mut coords = lo.clone();
        for _ in 0..volume {
            let a = self.values[self.support.flat_index(&coords).expect("in box")];
            let b = other.values[other.support.flat_index(&coords).expect("in box")];
            acc.add(a * b);
            // odometer increment, last axis fastest
            for i in (0..self.d).rev() {
                coords[i] += 1;
                if coords[i] < hi[i] {
                    break;
                }
                coords[i] = lo[i];
            }
        }
        Ok(acc.value())
    }

    fn check_axis(&self, axis: usize) -> Result<usize> {
        if axis == 0 || axis > self.d {
            return Err(Error::AxisOutOfRange { axis, d: self.d });
        }
        Ok(axis - 1)
    }

    /// Forward partial difference along `axis` (1-based):
    /// `(D_i phi)(zeta) = phi(zeta + e_i) - phi(zeta)`.
    ///
    /// The result is supported on the input box enlarged by one step in the
    /// negative `axis` direction: the new slab at `min - 1` picks up
    /// `phi(min)`.
    pub fn partial_difference(&self, axis: usize) -> Result<LatticeSeq> {
        let ax = self.check_axis(axis)?;
        let out_box = self.support.enlarged_down(ax);
        let out_shape = out_box.shape().to_vec();
        let in_shape = &self.support.shape;
        let in_strides = self.support.strides();
        let mut out = vec![0.0f64; out_box.volume()];
        let mut coords = vec![0usize; self.d];
        for slot in out.iter_mut() {
            // `coords` indexes the output box; relative to the input box the
            // axis coordinate is shifted by one.
            let mut base = 0usize;
            for j in 0..self.d {
                if j != ax {
                    base += coords[j] * in_strides[j];
                }
            }
            let ca = coords[ax];
            let upper = if ca < in_shape[ax] {
                self.values[base + ca * in_strides[ax]]
            } else {
                0.0
            };
            let lower = if ca >= 1 {
                self.values[base + (ca - 1) * in_strides[ax]]
            } else {
                0.0
            };
            *slot = upper - lower;
            for i in (0..self.d).rev() {
                coords[i] += 1;
                if coords[i] < out_shape[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
        LatticeSeq::new(self.d, out_box, out)
    }

    /// Composition of partial differences over a set of distinct axes.
    /// The operators commute, so the set determines the result; the empty
    /// set is the identity.
    pub fn mixed_difference(&self, axes: &[usize]) -> Result<LatticeSeq> {
        let mut seen = vec![false; self.d + 1];
        for &axis in axes {
            self.check_axis(axis)?;
            if seen[axis] {
                return Err(Error::DuplicateAxis { axis });
            }
            seen[axis] = true;
        }
        let mut sorted: Vec<usize> = axes.to_vec();
        sorted.sort_unstable();
        let mut cur = self.clone();
        for axis in sorted {
            cur = cur.partial_difference(axis)?;
        }
        Ok(cur)
    }

    /// Squared l2 norm of the discrete gradient: the sum over axes of
    /// `||D_i phi||^2`.
    pub fn gradient_sq_norm(&self) -> Result<f64> {
        if self.d == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut acc = CompensatedSum::new();
        for axis in 1..=self.d {
            acc.add(self.partial_difference(axis)?.l2_norm_sq());
        }
        Ok(acc.value())
    }

    /// The bracket operator: square root of the sum of `|phi|^2` over the
    /// first `k` coordinates, leaving a sequence of dimension `d - k` over
    /// the remaining coordinates.
    ///
    /// `k = 0` is the pointwise absolute value; `k = d` sums across all
    /// coordinates and returns the scalar `l2_norm`.
    pub fn bracket(&self, k: usize) -> Result<LatticeSeq> {
        if k > self.d {
            return Err(Error::BracketOutOfRange { k, d: self.d });
        }
        if k == 0 {
            // Exactly |phi| pointwise, not sqrt(phi^2), so no rounding.
            let values = self.values.iter().map(|v| v.abs()).collect();
            return LatticeSeq::new(self.d, self.support.clone(), values);
        }
        // Row-major with the last axis fastest means the first k axes are the
        // outer loops: values split as [prefix][suffix].
        let out_box = SupportBox::new(
            self.support.offset[k..].to_vec(),
            self.support.shape[k..].to_vec(),
        )?;
        let suffix_vol = out_box.volume();
        let prefix_vol = self.values.len() / suffix_vol;
        let mut sums = vec![CompensatedSum::new(); suffix_vol];
        for pre in 0..prefix_vol {
            let row = &self.values[pre * suffix_vol..(pre + 1) * suffix_vol];
            for (s, &v) in sums.iter_mut().zip(row) {
                s.add(v * v);
            }
        }
        let values = sums.iter().map(|s| s.value().sqrt()).collect();
        LatticeSeq::new(self.d - k, out_box, values)
    }

    /// The same values scaled by `c`.
    pub fn scaled(&self, c: f64) -> LatticeSeq {
        LatticeSeq {
            d: self.d,
            support: self.support.clone(),
            values: self.values.iter().map(|&v| c * v).collect(),
        }
    }

    /// `a * x + b * y` over the union box of the two supports.
    pub fn linear_combination(
        a: f64,
        x: &LatticeSeq,
        b: f64,
        y: &LatticeSeq,
    ) -> Result<LatticeSeq> {
        if x.d != y.d {
            return Err(Error::DimensionMismatch {
                expected: x.d,
                got: y.d,
            });
        }
        let d = x.d;
        let mut offset = vec![0i64; d];
        let mut shape = vec![0usize; d];
        for i in 0..d {
            let lo = x.support.offset[i].min(y.support.offset[i]);
            let hi = (x.support.offset[i] + x.support.shape[i] as i64)
                .max(y.support.offset[i] + y.support.shape[i] as i64);
            offset[i] = lo;
            shape[i] = (hi - lo) as usize;
        }
        let support = SupportBox { offset, shape };
        let mut values = vec![0.0f64; support.volume()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let p = support.point_at(idx);
            *slot = a * x.value_at(&p)? + b * y.value_at(&p)?;
        }
        LatticeSeq::new(d, support, values)
    }

    /// The same sequence with its box shifted by `shift` (values untouched).
    pub fn translated(&self, shift: &[i64]) -> Result<LatticeSeq> {
        Ok(LatticeSeq {
            d: self.d,
            support: self.support.translated(shift)?,
            values: self.values.clone(),
        })
    }

    /// The same sequence on a larger box, zero-padded. The target box must
    /// contain the current support.
    pub fn embedded_in(&self, target: &SupportBox) -> Result<LatticeSeq> {
        if !target.contains_box(&self.support) {
            return Err(Error::BoxNotContained);
        }
        let mut values = vec![0.0f64; target.volume()];
        for (idx, &v) in self.values.iter().enumerate() {
            let p = self.support.point_at(idx);
            values[target.flat_index(&p).expect("contained")] = v;
        }
        LatticeSeq::new(self.d, target.clone(), values)
    }

    /// Rescaled to unit l2 norm; the zero sequence has no direction.
    pub fn normalized(&self) -> Result<LatticeSeq> {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return Err(Error::ZeroSequence);
        }
        Ok(self.scaled(1.0 / norm))
    }
}
