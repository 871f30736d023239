//! Payload types, the `UWSC` wire format, size accounting and tensor file I/O.

mod bbox;
mod error;
mod payload;
mod size;
mod tensor;
mod tensor_io;
mod wire;

pub use bbox::BBox;
pub use error::CodecError;
pub use payload::{SemanticPayload, WirePrecision};
pub use size::{payload_size_bytes, payload_size_bytes_with, raw_size_bytes, PayloadSizeModel};
pub use tensor::{Dims, ImageTensor};
pub use tensor_io::{
    decode_ppm, decode_tensor, encode_ppm, encode_tensor, read_image, read_ppm, read_tensor, write_image,
    write_ppm, write_tensor, TENSOR_HEADER_BYTES, TENSOR_MAGIC, TENSOR_VERSION,
};
pub use wire::{
    decode_payload, encode_payload, encode_payload_with, framing_overhead, FRAMING_OVERHEAD_BYTES, PAYLOAD_MAGIC,
    PAYLOAD_VERSION, PAYLOAD_VERSION_TAGGED, wire_version,
};
