//! Deterministic simulator for query-driven semantic image transmission
//! over a shallow-water acoustic channel.
//!
//! An image is reduced to a three-part payload (answer text, a key region
//! and a heavily downsampled frame), impaired at a target SNR, rebuilt by a
//! baseline or external decoder, and scored.

pub mod channel;
pub mod codec;
pub mod imaging;
pub mod metrics;
pub mod pipeline;
pub mod rng;
mod serde_float;
pub mod synth;

pub use codec::{BBox, Dims, ImageTensor, SemanticPayload};
