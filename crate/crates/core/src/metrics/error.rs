use thiserror::Error;

use crate::codec::Dims;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("image shapes differ: {0} vs {1}")]
    DimMismatch(Dims, Dims),
    #[error("non-finite sample in {0}")]
    NonFinite(&'static str),
    #[error("invalid metric parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("probability row {row} sums to {sum}, not 1")]
    InvalidDistribution { row: usize, sum: f64 },
    #[error("label row {row} is not one-hot")]
    InvalidLabel { row: usize },
    #[error("box pair {index}: {reason}")]
    InvalidBox { index: usize, reason: String },
}
