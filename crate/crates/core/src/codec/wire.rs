//! `UWSC` payload container.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic        4 bytes  "UWSC"
//! version      u8       1 = f64 samples; 2 = followed by a precision tag
//! [precision]  u8       version 2 only: 0 f64, 1 f32, 2 u8
//! text         u16 length + bytes
//! bbox         u32 x, y, w, h
//! key_region   u32 C, H, W + C·H·W samples
//! hc_image     u32 C, H, W + C·H·W samples
//! original     u32 C, H, W
//! ```

use super::{BBox, CodecError, Dims, ImageTensor, SemanticPayload, WirePrecision};

pub const PAYLOAD_MAGIC: [u8; 4] = *b"UWSC";
pub const PAYLOAD_VERSION: u8 = 1;
/// Version carrying an explicit precision tag for reduced-width samples.
pub const PAYLOAD_VERSION_TAGGED: u8 = 2;

/// Bytes of framing around the three sections in a version-1 container:
/// magic, version, text length, bbox and the three dims triples.
pub const FRAMING_OVERHEAD_BYTES: usize = 4 + 1 + 2 + 16 + 12 + 12 + 12;

pub fn framing_overhead(precision: WirePrecision) -> usize {
    match precision {
        WirePrecision::F64 => FRAMING_OVERHEAD_BYTES,
        _ => FRAMING_OVERHEAD_BYTES + 1,
    }
}

/// Container version written for `precision`.
pub fn wire_version(precision: WirePrecision) -> u8 {
    match precision {
        WirePrecision::F64 => PAYLOAD_VERSION,
        _ => PAYLOAD_VERSION_TAGGED,
    }
}

/// Serializes a payload with 64-bit samples.
pub fn encode_payload(p: &SemanticPayload) -> Result<Vec<u8>, CodecError> {
    encode_payload_with(p, WirePrecision::F64)
}

pub fn encode_payload_with(p: &SemanticPayload, precision: WirePrecision) -> Result<Vec<u8>, CodecError> {
    p.validate()?;
    let samples = p.key_region.data().len() + p.hc_image.data().len();
    let mut out =
        Vec::with_capacity(framing_overhead(precision) + p.answer_text.len() + samples * precision.sample_bytes());
    out.extend_from_slice(&PAYLOAD_MAGIC);
    match precision {
        WirePrecision::F64 => out.push(PAYLOAD_VERSION),
        _ => {
            out.push(PAYLOAD_VERSION_TAGGED);
            out.push(precision.tag());
        }
    }
    out.extend_from_slice(&(p.answer_text.len() as u16).to_le_bytes());
    out.extend_from_slice(&p.answer_text);
    for v in [p.key_bbox.x, p.key_bbox.y, p.key_bbox.w, p.key_bbox.h] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    put_tensor(&mut out, &p.key_region, precision);
    put_tensor(&mut out, &p.hc_image, precision);
    put_dims(&mut out, p.original_dims);
    Ok(out)
}

fn put_dims(out: &mut Vec<u8>, d: Dims) {
    for v in [d.channels, d.height, d.width] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
}

fn put_tensor(out: &mut Vec<u8>, t: &ImageTensor, precision: WirePrecision) {
    put_dims(out, t.dims());
    match precision {
        WirePrecision::F64 => t.data().iter().for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        WirePrecision::F32 => t.data().iter().for_each(|&v| out.extend_from_slice(&(v as f32).to_le_bytes())),
        WirePrecision::U8 => out.extend(t.data().iter().map(|&v| (v * 255.0).round() as u8)),
    }
}

/// Parses a `UWSC` container. Total on arbitrary input: every byte string
/// yields a payload or a typed error.
pub fn decode_payload(bytes: &[u8]) -> Result<SemanticPayload, CodecError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let magic: [u8; 4] = r.take(4, "header")?.try_into().unwrap();
    if magic != PAYLOAD_MAGIC {
        return Err(CodecError::BadMagic { expected: PAYLOAD_MAGIC, found: magic });
    }
    let precision = match r.u8("header")? {
        PAYLOAD_VERSION => WirePrecision::F64,
        PAYLOAD_VERSION_TAGGED => WirePrecision::from_tag(r.u8("header")?)?,
        v => return Err(CodecError::UnsupportedVersion(v)),
    };
    let text_len = r.u16("text")? as usize;
    let answer_text = r.take(text_len, "text")?.to_vec();
    let key_bbox = BBox::new(r.u32("bbox")?, r.u32("bbox")?, r.u32("bbox")?, r.u32("bbox")?);
    let key_region = r.tensor("key_region", precision)?;
    let hc_image = r.tensor("hc_image", precision)?;
    let original_dims = r.dims("original_dims")?;
    if r.remaining() > 0 {
        return Err(CodecError::TrailingBytes(r.remaining()));
    }
    let p = SemanticPayload { answer_text, key_region, key_bbox, hc_image, original_dims };
    p.validate()?;
    Ok(p)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize, section: &'static str) -> Result<&'a [u8], CodecError> {
        if n > self.remaining() {
            return Err(CodecError::Truncated { section, needed: n, available: self.remaining() });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, section: &'static str) -> Result<u8, CodecError> {
        Ok(self.take(1, section)?[0])
    }

    fn u16(&mut self, section: &'static str) -> Result<u16, CodecError> {
        Ok(u16::from_le_bytes(self.take(2, section)?.try_into().unwrap()))
    }

    fn u32(&mut self, section: &'static str) -> Result<u32, CodecError> {
        Ok(u32::from_le_bytes(self.take(4, section)?.try_into().unwrap()))
    }

    fn dims(&mut self, section: &'static str) -> Result<Dims, CodecError> {
        let c = self.u32(section)? as usize;
        let h = self.u32(section)? as usize;
        let w = self.u32(section)? as usize;
        let dims = Dims::new(c, h, w);
        dims.validate()
            .map_err(|_| CodecError::InvalidField { field: section, reason: format!("invalid dims {dims}") })?;
        Ok(dims)
    }

    fn tensor(&mut self, section: &'static str, precision: WirePrecision) -> Result<ImageTensor, CodecError> {
        let dims = self.dims(section)?;
        let n = dims
            .channels
            .checked_mul(dims.height)
            .and_then(|v| v.checked_mul(dims.width))
            .ok_or(CodecError::DimOverflow { section })?;
        let len = n.checked_mul(precision.sample_bytes()).ok_or(CodecError::DimOverflow { section })?;
        let raw = self.take(len, section)?;
        let data: Vec<f64> = match precision {
            WirePrecision::F64 => {
                raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect()
            }
            WirePrecision::F32 => {
                raw.chunks_exact(4).map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap()))).collect()
            }
            WirePrecision::U8 => raw.iter().map(|&b| f64::from(b) / 255.0).collect(),
        };
        if data.iter().any(|v| !v.is_finite()) {
            return Err(CodecError::NonFiniteSample { section });
        }
        // Post-channel samples may sit marginally outside the unit range.
        let data = data.into_iter().map(super::tensor::clamp_unit).collect();
        Ok(ImageTensor::from_raw(dims, data))
    }
}
