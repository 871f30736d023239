//! Shallow-water acoustic link: absorption, path loss, ambient noise and
//! SNR-calibrated Gaussian corruption of payload symbols.

mod acoustics;
mod awgn;
mod error;
mod params;
mod range;

pub use acoustics::{
    absorption_db_per_km, absorption_linear, db_to_linear, link_snr_db, noise_power, noise_psd, path_loss_db,
    path_loss_linear, NoiseBreakdown,
};
pub use awgn::{noise_variance, signal_power, transmit, transmit_unclamped, SourceKind, SymbolBlock};
pub use error::ChannelError;
pub use params::ChannelParams;
pub use range::{snr_to_range, OperatingPoint, MAX_DISTANCE_KM, MIN_DISTANCE_KM};
