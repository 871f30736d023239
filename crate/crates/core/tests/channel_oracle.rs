//! Channel formulas against the independent high-precision evaluation in
//! `oracle/channel_oracle.py` (frozen into `fixtures/channel_oracle.json`).

use uwsemsim::channel::{
    absorption_db_per_km, link_snr_db, noise_power, noise_psd, path_loss_linear, snr_to_range, ChannelParams,
};

const REL_TOL: f64 = 1e-9;

fn oracle() -> serde_json::Value {
    let raw = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/channel_oracle.json"))
        .expect("oracle fixture");
    serde_json::from_str(&raw).unwrap()
}

fn close(what: &str, got: f64, want: f64) {
    let err = (got - want).abs() / want.abs().max(1e-300);
    assert!(err <= REL_TOL, "{what}: got {got:e}, want {want:e}, rel err {err:e}");
}

fn params(point: &serde_json::Value) -> ChannelParams {
    ChannelParams {
        frequency_khz: point["frequency_khz"].as_f64().unwrap(),
        distance_km: point["distance_km"].as_f64().unwrap(),
        bandwidth_khz: point["bandwidth_khz"].as_f64().unwrap(),
        ..ChannelParams::default()
    }
}

#[test]
fn grid_matches_oracle() {
    let o = oracle();
    let grid = o["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 50);
    for pt in grid {
        let p = params(pt);
        let f = |k: &str| pt[k].as_f64().unwrap();
        let tag = format!("f={} d={}", p.frequency_khz, p.distance_km);
        close(&format!("absorption {tag}"), absorption_db_per_km(p.frequency_khz).unwrap(), f("absorption_db_per_km"));
        close(&format!("path loss {tag}"), path_loss_linear(&p).unwrap(), f("path_loss_linear"));
        let n = noise_psd(&p).unwrap();
        close(&format!("turbulence {tag}"), n.turbulence_db, f("turbulence_db"));
        close(&format!("shipping {tag}"), n.shipping_db, f("shipping_db"));
        close(&format!("wind {tag}"), n.wind_db, f("wind_db"));
        close(&format!("thermal {tag}"), n.thermal_db, f("thermal_db"));
        close(&format!("psd linear {tag}"), n.total_linear, f("total_linear"));
        close(&format!("psd dB {tag}"), n.total_db, f("total_db"));
        close(&format!("noise power {tag}"), noise_power(&p).unwrap(), f("noise_power"));
    }
}

#[test]
fn grid_covers_the_required_ranges() {
    let o = oracle();
    let grid = o["grid"].as_array().unwrap();
    let fs: Vec<f64> = grid.iter().map(|p| p["frequency_khz"].as_f64().unwrap()).collect();
    let ds: Vec<f64> = grid.iter().map(|p| p["distance_km"].as_f64().unwrap()).collect();
    let (fmin, fmax) = fs.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let (dmin, dmax) = ds.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!((fmin - 0.1).abs() < 1e-12 && (fmax - 100.0).abs() < 1e-9);
    assert!((dmin - 0.1).abs() < 1e-12 && (dmax - 50.0).abs() < 1e-9);
    assert_eq!(o["parameters"]["spread_factor"], 1.5);
    assert_eq!(o["parameters"]["shipping_activity"], 0.5);
    assert_eq!(o["parameters"]["wind_speed"], 2.0);
}

#[test]
fn scalar_checks() {
    let o = oracle();
    let s = |k: &str| o[k].as_f64().unwrap();
    close("absorption f=1", absorption_db_per_km(1.0).unwrap(), s("absorption_f1"));
    close("absorption f=10", absorption_db_per_km(10.0).unwrap(), s("absorption_f10"));
    let p = ChannelParams::default().with_link(1.0, 2.0);
    close("path loss d=2 f=1", path_loss_linear(&p).unwrap(), s("path_loss_d2_f1"));
    let d = ChannelParams::default();
    close("noise psd f=1", noise_psd(&d.with_link(1.0, 1.0)).unwrap().total_db, s("total_db_f1"));
    close("noise power f=10", noise_power(&d).unwrap(), s("noise_power_f10_d1_b1"));
    let snr = link_snr_db(&d).unwrap();
    assert!((snr - s("snr_db_f10_d1_b1")).abs() <= 1e-9 * snr.abs());
    let op = snr_to_range(&d, 0.0).unwrap();
    let want = s("distance_for_snr0_f10_b1");
    assert!((op.distance_km - want).abs() <= 1e-4 * want, "{} vs {want}", op.distance_km);
}
