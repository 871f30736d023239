use super::{link_snr_db, ChannelError, ChannelParams};

pub const MIN_DISTANCE_KM: f64 = 1e-3;
pub const MAX_DISTANCE_KM: f64 = 1e4;
const SNR_TOLERANCE_DB: f64 = 1e-4;

/// Carrier frequency and link distance realizing a requested SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub frequency_khz: f64,
    pub distance_km: f64,
    pub achieved_snr_db: f64,
}

/// Solves for the distance at which a unit-power transmission sees
/// `snr_db`, holding the carrier at `params.frequency_khz`.
///
/// SNR falls monotonically with distance; the root is bracketed on
/// `[MIN_DISTANCE_KM, MAX_DISTANCE_KM]` and found by bisection in log-distance.
pub fn snr_to_range(params: &ChannelParams, snr_db: f64) -> Result<OperatingPoint, ChannelError> {
    if !snr_db.is_finite() {
        return Err(ChannelError::InvalidSnr(snr_db));
    }
    let snr_at = |log_d: f64| link_snr_db(&ChannelParams { distance_km: 10f64.powf(log_d), ..*params });
    let (mut lo, mut hi) = (MIN_DISTANCE_KM.log10(), MAX_DISTANCE_KM.log10());
    let high_db = snr_at(lo)?;
    let low_db = snr_at(hi)?;
    if !(low_db..=high_db).contains(&snr_db) {
        return Err(ChannelError::NoOperatingPoint {
            target_db: snr_db,
            min_km: MIN_DISTANCE_KM,
            max_km: MAX_DISTANCE_KM,
            low_db,
            high_db,
        });
    }
    let mut mid = 0.5 * (lo + hi);
    let mut achieved = snr_at(mid)?;
    for _ in 0..200 {
        if (achieved - snr_db).abs() <= SNR_TOLERANCE_DB {
            break;
        }
        if achieved > snr_db {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        achieved = snr_at(mid)?;
    }
    Ok(OperatingPoint { frequency_khz: params.frequency_khz, distance_km: 10f64.powf(mid), achieved_snr_db: achieved })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from tests/oracle/channel_oracle.py: mpmath root of the SNR
    // equation at f = 10 kHz, B = 1 kHz under the default link parameters.
    const DISTANCE_FOR_SNR0: f64 = 0.002177375977844239;

    #[test]
    fn fixed_point_at_unit_distance() {
        let p = ChannelParams::default();
        let target = link_snr_db(&p).unwrap();
        let op = snr_to_range(&p, target).unwrap();
        assert!((op.distance_km - 1.0).abs() < 1e-4, "{op:?}");
        assert!((op.achieved_snr_db - target).abs() <= 0.01);
    }

    #[test]
    fn zero_db_regression() {
        let op = snr_to_range(&ChannelParams::default(), 0.0).unwrap();
        assert!(((op.distance_km - DISTANCE_FOR_SNR0) / DISTANCE_FOR_SNR0).abs() < 1e-4, "{op:?}");
        assert!(op.achieved_snr_db.abs() <= 0.01);
    }

    #[test]
    fn monotone_in_target() {
        let p = ChannelParams::default();
        let ds: Vec<f64> = [-60.0, -50.0, -41.0, -20.0, 0.0, 5.0]
            .iter()
            .map(|&s| snr_to_range(&p, s).unwrap().distance_km)
            .collect();
        assert!(ds.windows(2).all(|w| w[1] < w[0]), "{ds:?}");
    }

    #[test]
    fn unreachable_target_reports_interval() {
        let err = snr_to_range(&ChannelParams::default(), 60.0).unwrap_err();
        match err {
            ChannelError::NoOperatingPoint { low_db, high_db, .. } => assert!(low_db < high_db && high_db < 60.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(snr_to_range(&ChannelParams::default(), f64::INFINITY).is_err());
    }
}
