use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("{what} = {value} is outside the model's domain")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid channel parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },
    #[error("cannot transmit an empty symbol block")]
    EmptyBlock,
    #[error("symbol {index} = {value} is not a finite value in [0, 1]")]
    InvalidSymbol { index: usize, value: f64 },
    #[error("target SNR {0} dB is not usable")]
    InvalidSnr(f64),
    #[error("no distance in [{min_km}, {max_km}] km reaches {target_db} dB; achievable SNR is [{low_db:.3}, {high_db:.3}] dB")]
    NoOperatingPoint { target_db: f64, min_km: f64, max_km: f64, low_db: f64, high_db: f64 },
}
