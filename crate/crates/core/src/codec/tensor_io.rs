//! Raw tensor files (`UWTN`) and 8-bit binary PPM.
//!
//! `UWTN`: magic "UWTN", u8 version (1), u32 C, H, W little-endian, then
//! C·H·W float64 little-endian samples.

use std::fs;
use std::path::Path;

use super::{CodecError, Dims, ImageTensor};

pub const TENSOR_MAGIC: [u8; 4] = *b"UWTN";
pub const TENSOR_VERSION: u8 = 1;
pub const TENSOR_HEADER_BYTES: usize = 4 + 1 + 12;

pub fn encode_tensor(t: &ImageTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(TENSOR_HEADER_BYTES + 8 * t.data().len());
    out.extend_from_slice(&TENSOR_MAGIC);
    out.push(TENSOR_VERSION);
    for v in [t.channels(), t.height(), t.width()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for v in t.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8]) -> Result<ImageTensor, CodecError> {
    if bytes.len() < TENSOR_HEADER_BYTES {
        return Err(CodecError::Truncated {
            section: "tensor header",
            needed: TENSOR_HEADER_BYTES,
            available: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != TENSOR_MAGIC {
        return Err(CodecError::BadMagic { expected: TENSOR_MAGIC, found: magic });
    }
    if bytes[4] != TENSOR_VERSION {
        return Err(CodecError::UnsupportedVersion(bytes[4]));
    }
    let dim = |i: usize| u32::from_le_bytes(bytes[5 + 4 * i..9 + 4 * i].try_into().unwrap()) as usize;
    let dims = Dims::new(dim(0), dim(1), dim(2));
    dims.validate()?;
    let body = &bytes[TENSOR_HEADER_BYTES..];
    let expected = dims
        .channels
        .checked_mul(dims.height)
        .and_then(|n| n.checked_mul(dims.width))
        .and_then(|n| n.checked_mul(8))
        .ok_or(CodecError::DimOverflow { section: "tensor" })?;
    if body.len() != expected {
        return Err(CodecError::LengthMismatch { expected, actual: body.len() });
    }
    let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    ImageTensor::new(dims, data)
}

pub fn write_tensor(path: impl AsRef<Path>, t: &ImageTensor) -> Result<(), CodecError> {
    fs::write(path, encode_tensor(t))?;
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<ImageTensor, CodecError> {
    decode_tensor(&fs::read(path)?)
}

/// Encodes a 3-channel tensor as binary PPM with samples quantized to
/// `round(v * 255)`.
pub fn encode_ppm(t: &ImageTensor) -> Result<Vec<u8>, CodecError> {
    if t.channels() != 3 {
        return Err(CodecError::Ppm(format!("P6 needs 3 channels, tensor has {}", t.channels())));
    }
    let header = format!("P6\n{} {}\n255\n", t.width(), t.height());
    let mut out = Vec::with_capacity(header.len() + t.data().len());
    out.extend_from_slice(header.as_bytes());
    let plane = t.dims().pixel_count();
    for i in 0..plane {
        for c in 0..3 {
            out.push((t.data()[c * plane + i] * 255.0).round() as u8);
        }
    }
    Ok(out)
}

pub fn decode_ppm(bytes: &[u8]) -> Result<ImageTensor, CodecError> {
    let mut pos = 0;
    let magic = ppm_token(bytes, &mut pos)?;
    if magic != b"P6" {
        return Err(CodecError::Ppm(format!("expected P6 magic, found {:?}", String::from_utf8_lossy(magic))));
    }
    let width = ppm_number(bytes, &mut pos, "width")?;
    let height = ppm_number(bytes, &mut pos, "height")?;
    let maxval = ppm_number(bytes, &mut pos, "maxval")?;
    if !(1..=255).contains(&maxval) {
        return Err(CodecError::Ppm(format!("maxval {maxval} is not an 8-bit depth")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(CodecError::Ppm("missing whitespace after maxval".into()));
    }
    pos += 1;
    let dims = Dims::new(3, height, width);
    dims.validate()?;
    let plane = dims.pixel_count();
    let raster = &bytes[pos..];
    if raster.len() != plane * 3 {
        return Err(CodecError::LengthMismatch { expected: plane * 3, actual: raster.len() });
    }
    let scale = maxval as f64;
    let mut data = vec![0.0; plane * 3];
    for (i, px) in raster.chunks_exact(3).enumerate() {
        for c in 0..3 {
            data[c * plane + i] = (f64::from(px[c]) / scale).min(1.0);
        }
    }
    ImageTensor::new(dims, data)
}

fn ppm_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8], CodecError> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(CodecError::Ppm("unexpected end of header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn ppm_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize, CodecError> {
    let tok = ppm_token(bytes, pos)?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| CodecError::Ppm(format!("bad {what} {:?}", String::from_utf8_lossy(tok))))
}

pub fn write_ppm(path: impl AsRef<Path>, t: &ImageTensor) -> Result<(), CodecError> {
    fs::write(path, encode_ppm(t)?)?;
    Ok(())
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<ImageTensor, CodecError> {
    decode_ppm(&fs::read(path)?)
}

fn is_ppm(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("ppm"))
}

/// Reads a `.ppm` file as PPM and anything else as `UWTN`.
pub fn read_image(path: impl AsRef<Path>) -> Result<ImageTensor, CodecError> {
    let path = path.as_ref();
    if is_ppm(path) {
        read_ppm(path)
    } else {
        read_tensor(path)
    }
}

/// Writes `.ppm` paths as PPM and anything else as `UWTN`.
pub fn write_image(path: impl AsRef<Path>, t: &ImageTensor) -> Result<(), CodecError> {
    let path = path.as_ref();
    if is_ppm(path) {
        write_ppm(path, t)
    } else {
        write_tensor(path, t)
    }
}
