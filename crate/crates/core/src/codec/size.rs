//! Payload size accounting: one byte per text code unit, eight per sample.

use super::{Dims, SemanticPayload, WirePrecision};

/// Section bytes of a payload at 64-bit samples, excluding framing.
pub fn payload_size_bytes(p: &SemanticPayload) -> u64 {
    payload_size_bytes_with(p, WirePrecision::F64)
}

pub fn payload_size_bytes_with(p: &SemanticPayload, precision: WirePrecision) -> u64 {
    let samples = (p.key_region.data().len() + p.hc_image.data().len()) as u64;
    p.answer_text.len() as u64 + samples * precision.sample_bytes() as u64
}

/// Bytes of an uncompressed tensor at the given precision.
pub fn raw_size_bytes(dims: Dims, precision: WirePrecision) -> u64 {
    dims.sample_count() as u64 * precision.sample_bytes() as u64
}

/// Analytic size budget for a payload whose key region occupies a fraction
/// of its allotted grid, as used for averaged accounting over a dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayloadSizeModel {
    pub original: Dims,
    pub hc: Dims,
    pub key_budget: Dims,
    pub key_area_fraction: f64,
    pub text_len: usize,
    pub precision: WirePrecision,
}

impl PayloadSizeModel {
    pub fn original_bytes(&self) -> u64 {
        raw_size_bytes(self.original, self.precision)
    }

    pub fn hc_bytes(&self) -> u64 {
        raw_size_bytes(self.hc, self.precision)
    }

    pub fn key_budget_bytes(&self) -> u64 {
        raw_size_bytes(self.key_budget, self.precision)
    }

    /// Whole bytes occupied by the key region at its area fraction.
    pub fn key_bytes(&self) -> u64 {
        (self.key_area_fraction * self.key_budget_bytes() as f64).floor() as u64
    }

    pub fn text_bytes(&self) -> u64 {
        self.text_len as u64
    }

    pub fn total_bytes(&self) -> u64 {
        self.text_bytes() + self.hc_bytes() + self.key_bytes()
    }

    /// Fractional size reduction relative to the uncompressed original.
    pub fn reduction(&self) -> f64 {
        1.0 - self.total_bytes() as f64 / self.original_bytes() as f64
    }
}
