//! Channel stage: each payload part becomes a symbol block and is corrupted
//! independently at the same SNR.

use crate::channel::{self, ChannelParams, SourceKind, SymbolBlock};
use crate::codec::{ImageTensor, SemanticPayload};
use crate::rng::{derive_seed, seeded};

use super::PipelineError;

fn stream_index(kind: SourceKind) -> u64 {
    match kind {
        SourceKind::Text => 0,
        SourceKind::KeyImage => 1,
        SourceKind::HcImage => 2,
    }
}

fn corrupt(symbols: Vec<f64>, kind: SourceKind, range: (f64, f64), snr_db: f64, seed: u64) -> Result<Vec<f64>, PipelineError> {
    let block = SymbolBlock::new(symbols, kind, range);
    let mut rng = seeded(derive_seed(seed, &[stream_index(kind)]));
    Ok(channel::transmit(&block, snr_db, &mut rng)?.symbols)
}

fn corrupt_image(t: &ImageTensor, kind: SourceKind, snr_db: f64, seed: u64) -> Result<ImageTensor, PipelineError> {
    let symbols = corrupt(t.data().to_vec(), kind, (0.0, 1.0), snr_db, seed)?;
    Ok(ImageTensor::new(t.dims(), symbols)?)
}

/// Passes the payload through the channel at `snr_db`.
///
/// Text bytes travel as `b / 255` and are re-quantized with `round(v·255)`.
/// The bbox and dims are side information and pass unchanged. The link
/// parameters are checked here but corruption is calibrated by `snr_db`
/// alone.
pub fn channel_pass(
    p: &SemanticPayload,
    snr_db: f64,
    channel: &ChannelParams,
    seed: u64,
) -> Result<SemanticPayload, PipelineError> {
    channel.validate()?;
    let answer_text = if p.answer_text.is_empty() {
        Vec::new()
    } else {
        let symbols = p.answer_text.iter().map(|&b| f64::from(b) / 255.0).collect();
        corrupt(symbols, SourceKind::Text, (0.0, 255.0), snr_db, seed)?
            .into_iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    };
    Ok(SemanticPayload {
        answer_text,
        key_region: corrupt_image(&p.key_region, SourceKind::KeyImage, snr_db, seed)?,
        key_bbox: p.key_bbox,
        hc_image: corrupt_image(&p.hc_image, SourceKind::HcImage, snr_db, seed)?,
        original_dims: p.original_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{BBox, Dims};

    fn payload() -> SemanticPayload {
        SemanticPayload {
            answer_text: "a school of fish near the reef".as_bytes().to_vec(),
            key_region: ImageTensor::from_fn(Dims::new(3, 8, 8), |c, y, x| ((c + y * x) % 5) as f64 / 4.0).unwrap(),
            key_bbox: BBox::new(4, 4, 16, 16),
            hc_image: ImageTensor::from_fn(Dims::new(3, 4, 4), |c, y, x| ((c * 3 + y + x) % 7) as f64 / 6.0).unwrap(),
            original_dims: Dims::new(3, 32, 32),
        }
    }

    #[test]
    fn clean_channel_is_identity() {
        let p = payload();
        let out = channel_pass(&p, f64::INFINITY, &ChannelParams::default(), 3).unwrap();
        assert!(out.bit_eq(&p));
    }

    #[test]
    fn noisy_channel_is_deterministic_per_seed() {
        let p = payload();
        let ch = ChannelParams::default();
        let a = channel_pass(&p, 0.0, &ch, 7).unwrap();
        let b = channel_pass(&p, 0.0, &ch, 7).unwrap();
        let c = channel_pass(&p, 0.0, &ch, 8).unwrap();
        assert!(a.bit_eq(&b));
        assert!(!a.bit_eq(&c));
        assert_ne!(a.answer_text, p.answer_text);
        assert_eq!(a.answer_text.len(), p.answer_text.len());
        assert_eq!(a.key_bbox, p.key_bbox);
    }

    #[test]
    fn empty_text_survives() {
        let mut p = payload();
        p.answer_text.clear();
        let out = channel_pass(&p, 3.0, &ChannelParams::default(), 1).unwrap();
        assert!(out.answer_text.is_empty());
    }
}
