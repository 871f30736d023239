use serde::{Deserialize, Serialize};

use super::{BBox, CodecError, Dims, ImageTensor};

/// The transmitted triple: answer text, key-region crop with its location,
/// and the highly compressed whole frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticPayload {
    /// UTF-8 on the transmitter side; arbitrary bytes after the channel.
    pub answer_text: Vec<u8>,
    pub key_region: ImageTensor,
    /// Where the key region sits in the original frame.
    pub key_bbox: BBox,
    pub hc_image: ImageTensor,
    pub original_dims: Dims,
}

impl SemanticPayload {
    /// Structural invariants that every serialized payload must satisfy.
    pub fn validate(&self) -> Result<(), CodecError> {
        if self.answer_text.len() > u16::MAX as usize {
            return Err(CodecError::InvalidField {
                field: "answer_text",
                reason: format!("{} bytes exceeds the u16 length prefix", self.answer_text.len()),
            });
        }
        self.original_dims.validate().map_err(|_| CodecError::InvalidField {
            field: "original_dims",
            reason: format!("{} is not a valid image shape", self.original_dims),
        })?;
        for (field, t) in [("key_region", &self.key_region), ("hc_image", &self.hc_image)] {
            if t.channels() != self.original_dims.channels {
                return Err(CodecError::InvalidField {
                    field,
                    reason: format!(
                        "{} channels but the original frame has {}",
                        t.channels(),
                        self.original_dims.channels
                    ),
                });
            }
            if u32::try_from(t.height()).is_err() || u32::try_from(t.width()).is_err() {
                return Err(CodecError::InvalidField { field, reason: "dims exceed u32".into() });
            }
        }
        self.key_bbox
            .validate_within(self.original_dims.width, self.original_dims.height)
            .map_err(|e| CodecError::InvalidField { field: "key_bbox", reason: e.to_string() })
    }

    /// Payload text as a string, replacing invalid UTF-8 sequences.
    pub fn text_lossy(&self) -> String {
        String::from_utf8_lossy(&self.answer_text).into_owned()
    }

    pub fn bit_eq(&self, other: &SemanticPayload) -> bool {
        self.answer_text == other.answer_text
            && self.key_bbox == other.key_bbox
            && self.original_dims == other.original_dims
            && self.key_region.bit_eq(&other.key_region)
            && self.hc_image.bit_eq(&other.hc_image)
    }
}

/// Sample width used on the wire.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WirePrecision {
    /// 8-byte IEEE-754 floats, the accounting baseline.
    #[default]
    F64,
    F32,
    /// One byte per sample, `round(v * 255)`.
    U8,
}

impl WirePrecision {
    pub fn sample_bytes(self) -> usize {
        match self {
            WirePrecision::F64 => 8,
            WirePrecision::F32 => 4,
            WirePrecision::U8 => 1,
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            WirePrecision::F64 => 0,
            WirePrecision::F32 => 1,
            WirePrecision::U8 => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Result<Self, CodecError> {
        match tag {
            0 => Ok(WirePrecision::F64),
            1 => Ok(WirePrecision::F32),
            2 => Ok(WirePrecision::U8),
            other => Err(CodecError::UnknownPrecision(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WirePrecision::F64 => "f64",
            WirePrecision::F32 => "f32",
            WirePrecision::U8 => "u8",
        }
    }
}

impl std::str::FromStr for WirePrecision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f64" => Ok(WirePrecision::F64),
            "f32" => Ok(WirePrecision::F32),
            "u8" => Ok(WirePrecision::U8),
            other => Err(format!("unknown wire precision `{other}` (expected f64, f32 or u8)")),
        }
    }
}
