//! Empirical pre-clamp SNR of the AWGN stage against its target.

use rand::Rng;
use uwsemsim::channel::{signal_power, transmit, transmit_unclamped, SourceKind, SymbolBlock};
use uwsemsim::rng::seeded;

fn empirical_snr_db(clean: &[f64], noisy: &[f64]) -> f64 {
    let noise = clean.iter().zip(noisy).map(|(a, b)| (b - a) * (b - a)).sum::<f64>() / clean.len() as f64;
    10.0 * (signal_power(clean) / noise).log10()
}

#[test]
fn targets_are_met_within_a_tenth_of_a_db() {
    let n = 200_000;
    for seed in 0..5u64 {
        let mut rng = seeded(1000 + seed);
        let symbols: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let block = SymbolBlock::new(symbols, SourceKind::KeyImage, (0.0, 1.0));
        for target in [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0] {
            let noisy = transmit_unclamped(&block, target, &mut seeded(seed)).unwrap();
            let got = empirical_snr_db(&block.symbols, &noisy);
            assert!((got - target).abs() <= 0.1, "seed {seed} target {target}: {got}");
        }
    }
}

#[test]
fn clamped_output_is_the_saturated_unclamped_output() {
    let mut rng = seeded(3);
    let symbols: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
    let block = SymbolBlock::new(symbols, SourceKind::HcImage, (0.0, 1.0));
    let raw = transmit_unclamped(&block, 3.0, &mut seeded(9)).unwrap();
    let out = transmit(&block, 3.0, &mut seeded(9)).unwrap();
    assert!(raw.iter().any(|v| !(0.0..=1.0).contains(v)));
    for (r, o) in raw.iter().zip(&out.symbols) {
        assert_eq!(r.clamp(0.0, 1.0).to_bits(), o.to_bits());
    }
}
