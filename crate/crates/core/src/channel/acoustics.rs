//! Thorp absorption, spreading path loss and the four-term ambient noise
//! spectrum. Frequencies in kHz, distances in km, logarithms base 10.
//! Noise levels are relative dB with no pressure reference: only ratios
//! against signal power are meaningful downstream.

use super::{ChannelError, ChannelParams};

/// Thorp absorption coefficient in dB/km.
pub fn absorption_db_per_km(frequency_khz: f64) -> Result<f64, ChannelError> {
    if !(frequency_khz >= 0.0 && frequency_khz.is_finite()) {
        return Err(ChannelError::Domain { what: "frequency_khz", value: frequency_khz });
    }
    let f2 = frequency_khz * frequency_khz;
    Ok(0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003)
}

/// Linear per-km absorption factor `10^(dB/10)`.
pub fn absorption_linear(frequency_khz: f64) -> Result<f64, ChannelError> {
    Ok(db_to_linear(absorption_db_per_km(frequency_khz)?))
}

pub(crate) fn spreading_absorption(distance_km: f64, spread_factor: f64, absorption_linear: f64) -> f64 {
    distance_km.powf(spread_factor) * absorption_linear.powf(distance_km)
}

/// Attenuation `d^σ · a(f)^d` as a linear factor.
pub fn path_loss_linear(params: &ChannelParams) -> Result<f64, ChannelError> {
    params.validate()?;
    Ok(spreading_absorption(params.distance_km, params.spread_factor, absorption_linear(params.frequency_khz)?))
}

/// The same attenuation in dB, without forming the (possibly huge) linear value.
pub fn path_loss_db(params: &ChannelParams) -> Result<f64, ChannelError> {
    params.validate()?;
    Ok(10.0 * params.spread_factor * params.distance_km.log10()
        + params.distance_km * absorption_db_per_km(params.frequency_khz)?)
}

/// Ambient noise spectral levels at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBreakdown {
    pub turbulence_db: f64,
    pub shipping_db: f64,
    pub wind_db: f64,
    pub thermal_db: f64,
    pub total_db: f64,
    pub total_linear: f64,
}

impl NoiseBreakdown {
    pub fn components_db(&self) -> [f64; 4] {
        [self.turbulence_db, self.shipping_db, self.wind_db, self.thermal_db]
    }
}

pub fn noise_psd(params: &ChannelParams) -> Result<NoiseBreakdown, ChannelError> {
    params.validate()?;
    let f = params.frequency_khz;
    let lf = f.log10();
    let turbulence_db = 17.0 - 30.0 * lf;
    let shipping_db = 30.0 + 20.0 * params.shipping_activity + 26.0 * lf - 60.0 * (f + 0.03).log10();
    let wind_db = 50.0 + 7.5 * params.wind_speed.sqrt() + 20.0 * lf - 40.0 * (f + 0.4).log10();
    let thermal_db = -15.0 + 20.0 * lf;
    let total_linear = [turbulence_db, shipping_db, wind_db, thermal_db].into_iter().map(db_to_linear).sum::<f64>();
    Ok(NoiseBreakdown {
        turbulence_db,
        shipping_db,
        wind_db,
        thermal_db,
        total_db: 10.0 * total_linear.log10(),
        total_linear,
    })
}

/// Received noise power: narrowband PSD at the carrier, times path loss,
/// times bandwidth.
pub fn noise_power(params: &ChannelParams) -> Result<f64, ChannelError> {
    Ok(noise_psd(params)?.total_linear * path_loss_linear(params)? * params.bandwidth_khz)
}

/// `10·log10(P_signal / noise_power)` for a unit transmit power, evaluated in
/// the log domain so that long links do not overflow.
pub fn link_snr_db(params: &ChannelParams) -> Result<f64, ChannelError> {
    Ok(-(noise_psd(params)?.total_db + path_loss_db(params)? + 10.0 * params.bandwidth_khz.log10()))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from tests/oracle/channel_oracle.py (50-digit evaluation).
    const ABSORPTION_F1: f64 = 0.06900409046574006;
    const PATH_LOSS_D2_F1: f64 = 2.9197509713302856;
    const TOTAL_DB_F1: f64 = 54.882029515763385;
    const NOISE_POWER_F10: f64 = 12928.388433741846;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn absorption_points() {
        assert_eq!(absorption_db_per_km(0.0).unwrap(), 0.003);
        let a1 = absorption_db_per_km(1.0).unwrap();
        assert!((a1 - ABSORPTION_F1).abs() < 1e-12);
        assert!((a1 - 0.069004).abs() < 1e-6);
        assert!(matches!(absorption_db_per_km(-1.0), Err(ChannelError::Domain { .. })));
    }

    #[test]
    fn unit_distance_path_loss_is_absorption() {
        for f in [0.5, 1.0, 10.0, 70.0] {
            let p = ChannelParams::default().with_link(f, 1.0);
            assert_eq!(path_loss_linear(&p).unwrap(), absorption_linear(f).unwrap());
        }
    }

    #[test]
    fn path_loss_two_km() {
        let p = ChannelParams::default().with_link(1.0, 2.0);
        assert!(rel(path_loss_linear(&p).unwrap(), PATH_LOSS_D2_F1) < 1e-12);
        let manual = 2f64.powf(1.5) * absorption_linear(1.0).unwrap().powi(2);
        assert!(rel(path_loss_linear(&p).unwrap(), manual) < 1e-12);
    }

    #[test]
    fn identity_limit_without_spreading_or_absorption() {
        for d in [0.01, 0.5, 1.0, 7.0, 300.0] {
            assert_eq!(spreading_absorption(d, 0.0, 1.0), 1.0);
        }
    }

    #[test]
    fn noise_at_one_khz() {
        let p = ChannelParams::default().with_link(1.0, 1.0);
        let n = noise_psd(&p).unwrap();
        assert_eq!(n.turbulence_db, 17.0);
        assert_eq!(n.thermal_db, -15.0);
        assert!((n.total_db - TOTAL_DB_F1).abs() < 1e-9);
        let sum: f64 = n.components_db().iter().map(|&d| db_to_linear(d)).sum();
        assert_eq!(sum, n.total_linear);
    }

    #[test]
    fn noise_domain() {
        let p = ChannelParams { frequency_khz: 0.0, ..ChannelParams::default() };
        assert!(noise_psd(&p).is_err());
    }

    #[test]
    fn noise_power_composition() {
        let p = ChannelParams::default().with_link(3.0, 1.0);
        let expected = noise_psd(&p).unwrap().total_linear * absorption_linear(3.0).unwrap();
        assert!(rel(noise_power(&p).unwrap(), expected) < 1e-15);
        let wide = ChannelParams { bandwidth_khz: 2.0, ..p };
        assert_eq!(noise_power(&wide).unwrap(), 2.0 * noise_power(&p).unwrap());
        let q = ChannelParams::default();
        assert!(rel(noise_power(&q).unwrap(), NOISE_POWER_F10) < 1e-9);
    }

    #[test]
    fn log_domain_snr_agrees_with_linear() {
        for (f, d) in [(1.0, 0.3), (10.0, 1.0), (40.0, 5.0)] {
            let p = ChannelParams::default().with_link(f, d);
            let lin = -10.0 * noise_power(&p).unwrap().log10();
            assert!((link_snr_db(&p).unwrap() - lin).abs() < 1e-9);
        }
    }
}
