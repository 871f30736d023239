use thiserror::Error;

use super::{BBox, Dims};

/// Errors raised while building, serializing or parsing payload containers.
#[derive(Debug, Error)]
pub enum CodecError {
    #[error("invalid tensor dims {0}: channels must be 1 or 3 and height, width at least 1")]
    InvalidDims(Dims),
    #[error("tensor data length {actual} does not match dims (expected {expected})")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("sample {index} = {value} is outside [0, 1]")]
    SampleOutOfRange { index: usize, value: f64 },
    #[error("non-finite sample in {section}")]
    NonFiniteSample { section: &'static str },
    #[error("bbox {bbox} has zero area")]
    ZeroAreaBBox { bbox: BBox },
    #[error("bbox {bbox} lies outside a {width}x{height} frame")]
    BBoxOutOfBounds { bbox: BBox, width: usize, height: usize },
    #[error("invalid payload field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown wire precision tag {0}")]
    UnknownPrecision(u8),
    #[error("truncated {section}: needed {needed} bytes, {available} available")]
    Truncated { section: &'static str, needed: usize, available: usize },
    #[error("declared dims of {section} overflow the addressable size")]
    DimOverflow { section: &'static str },
    #[error("{0} trailing bytes after the last section")]
    TrailingBytes(usize),
    #[error("malformed PPM: {0}")]
    Ppm(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
