//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("offset has {offset_len} entries but shape has {shape_len}")]
    BoxLengthMismatch { offset_len: usize, shape_len: usize },

    #[error("axis {axis}: shape entry must be at least 1")]
    EmptyAxis { axis: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("expected {expected} values for the support box, got {got}")]
    ValueCountMismatch { expected: usize, got: usize },

    #[error("axis {axis} out of range for dimension {d}")]
    AxisOutOfRange { axis: usize, d: usize },

    #[error("axis {axis} given more than once")]
    DuplicateAxis { axis: usize },

    #[error("bracket depth {k} out of range for dimension {d}")]
    BracketOutOfRange { k: usize, d: usize },

    #[error("operation requires dimension at least 1")]
    ZeroDimension,

    #[error("p = {p} out of range for d = {d}: require 1 <= p <= 2^(d-1)")]
    InvalidP { p: u128, d: u32 },

    #[error("order {order} out of range for the {branch} branch at d = {d}")]
    OrderOutOfRange {
        order: u32,
        d: u32,
        branch: &'static str,
    },

    #[error("dimension {d} out of range: term enumeration supports 1 <= d <= {max}")]
    DimensionCap { d: u32, max: u32 },

    #[error("invalid reduction plan: {0}")]
    InvalidPlan(String),

    #[error("a term without axis 1 cannot be reduced to the first-axis difference norm")]
    PlainTermToFirstDiff,

    #[error("the zero sequence has no ratio")]
    ZeroSequence,

    #[error("target box does not contain the sequence support")]
    BoxNotContained,

    #[error("half-axis mode requires support in indices >= 0, found nonzero value at {index}")]
    SupportBelowZero { index: i64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sequence file: {0}")]
    Parse(String),
}
