//! SNR-calibrated additive Gaussian corruption of symbol blocks.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ChannelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Text,
    KeyImage,
    HcImage,
}

/// Channel symbols normalized to [0, 1], tagged with their source.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub symbols: Vec<f64>,
    pub source_kind: SourceKind,
    /// Value range the symbols were normalized from.
    pub nominal_range: (f64, f64),
}

impl SymbolBlock {
    pub fn new(symbols: Vec<f64>, source_kind: SourceKind, nominal_range: (f64, f64)) -> Self {
        SymbolBlock { symbols, source_kind, nominal_range }
    }

    fn check(&self) -> Result<(), ChannelError> {
        if self.symbols.is_empty() {
            return Err(ChannelError::EmptyBlock);
        }
        match self.symbols.iter().position(|v| !(v.is_finite() && (0.0..=1.0).contains(v))) {
            Some(index) => Err(ChannelError::InvalidSymbol { index, value: self.symbols[index] }),
            None => Ok(()),
        }
    }
}

/// Mean square of the mean-removed sequence. Exactly zero for a constant
/// sequence, whatever rounding the mean picks up.
pub fn signal_power(symbols: &[f64]) -> f64 {
    if symbols.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let n = symbols.len() as f64;
    let mean = symbols.iter().sum::<f64>() / n;
    symbols.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Gaussian noise variance that realizes `snr_db` against `power`.
pub fn noise_variance(power: f64, snr_db: f64) -> f64 {
    power / 10f64.powf(snr_db / 10.0)
}

/// Adds calibrated noise without the final clamp. `snr_db = +inf` and zero
/// signal variance both leave the symbols untouched and draw nothing.
pub fn transmit_unclamped<R: Rng + ?Sized>(
    block: &SymbolBlock,
    snr_db: f64,
    rng: &mut R,
) -> Result<Vec<f64>, ChannelError> {
    block.check()?;
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(ChannelError::InvalidSnr(snr_db));
    }
    if snr_db == f64::INFINITY {
        return Ok(block.symbols.clone());
    }
    let variance = noise_variance(signal_power(&block.symbols), snr_db);
    if variance == 0.0 {
        return Ok(block.symbols.clone());
    }
    let sigma = variance.sqrt();
    Ok(block
        .symbols
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(rng);
            v + sigma * z
        })
        .collect())
}

/// Corrupts a block at `snr_db` and saturates the result to [0, 1].
pub fn transmit<R: Rng + ?Sized>(block: &SymbolBlock, snr_db: f64, rng: &mut R) -> Result<SymbolBlock, ChannelError> {
    let noisy = transmit_unclamped(block, snr_db, rng)?;
    Ok(SymbolBlock {
        symbols: noisy.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
        source_kind: block.source_kind,
        nominal_range: block.nominal_range,
    })
}
