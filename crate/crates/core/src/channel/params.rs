use serde::{Deserialize, Serialize};

use super::ChannelError;

/// Propagation and ambient-noise parameters of the acoustic link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Geometric spreading exponent: 1 cylindrical, 2 spherical.
    pub spread_factor: f64,
    /// Shipping activity in [0, 1].
    pub shipping_activity: f64,
    /// Wind speed, m/s.
    pub wind_speed: f64,
    pub frequency_khz: f64,
    pub distance_km: f64,
    /// Receiver bandwidth used to turn the noise PSD into a power.
    pub bandwidth_khz: f64,
    /// Seed for single-shot transmissions. Sweeps derive cell seeds from
    /// the sweep seed instead.
    pub seed: u64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            spread_factor: 1.5,
            shipping_activity: 0.5,
            wind_speed: 2.0,
            frequency_khz: 10.0,
            distance_km: 1.0,
            bandwidth_khz: 1.0,
            seed: 0,
        }
    }
}

impl ChannelParams {
    pub fn with_link(self, frequency_khz: f64, distance_km: f64) -> Self {
        ChannelParams { frequency_khz, distance_km, ..self }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |field, reason: &str| Err(ChannelError::InvalidParams { field, reason: reason.to_string() });
        if !(0.0..=1.0).contains(&self.shipping_activity) {
            return bad("shipping_activity", "must lie in [0, 1]");
        }
        if !(self.wind_speed >= 0.0 && self.wind_speed.is_finite()) {
            return bad("wind_speed", "must be finite and non-negative");
        }
        if !(self.frequency_khz > 0.0 && self.frequency_khz.is_finite()) {
            return bad("frequency_khz", "must be finite and positive");
        }
        if !(self.distance_km > 0.0 && self.distance_km.is_finite()) {
            return bad("distance_km", "must be finite and positive");
        }
        if !(self.bandwidth_khz > 0.0 && self.bandwidth_khz.is_finite()) {
            return bad("bandwidth_khz", "must be finite and positive");
        }
        if !self.spread_factor.is_finite() {
            return bad("spread_factor", "must be finite");
        }
        if !(1.0..=2.0).contains(&self.spread_factor) {
            log::warn!("spread factor {} is outside the usual [1, 2] range", self.spread_factor);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ChannelParams::default().validate().unwrap();
    }

    #[test]
    fn field_checks() {
        let p = ChannelParams::default();
        let cases = [
            ChannelParams { shipping_activity: 1.2, ..p },
            ChannelParams { wind_speed: -1.0, ..p },
            ChannelParams { frequency_khz: 0.0, ..p },
            ChannelParams { distance_km: -3.0, ..p },
            ChannelParams { bandwidth_khz: 0.0, ..p },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(ChannelError::InvalidParams { .. })), "{c:?}");
        }
        // Unusual spreading only warns.
        ChannelParams { spread_factor: 2.5, ..p }.validate().unwrap();
    }
}
