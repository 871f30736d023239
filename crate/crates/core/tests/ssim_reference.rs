//! Gaussian-window SSIM against values captured from the reference
//! implementation in `oracle/ssim_reference.py`.

use std::path::PathBuf;

use rand::Rng;
use uwsemsim::codec::{read_tensor, Dims, ImageTensor};
use uwsemsim::metrics::{ssim, ssim_two_term, SsimParams};
use uwsemsim::rng::seeded;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/ssim")
}

#[test]
fn fixture_pairs_match_reference() {
    let raw = std::fs::read_to_string(fixtures().join("expected.json")).unwrap();
    let expected: Vec<serde_json::Value> = serde_json::from_str(&raw).unwrap();
    assert_eq!(expected.len(), 10);
    let p = SsimParams::default();
    for e in &expected {
        let name = e["name"].as_str().unwrap();
        let want = e["ssim"].as_f64().unwrap();
        let x = read_tensor(fixtures().join(format!("{name}_x.uwtn"))).unwrap();
        let y = read_tensor(fixtures().join(format!("{name}_y.uwtn"))).unwrap();
        let got = ssim(&x, &y, &p).unwrap();
        assert!((got - want).abs() <= 1e-6, "{name}: got {got}, want {want}");
    }
}

fn random_image(rng: &mut impl Rng, dims: Dims) -> ImageTensor {
    ImageTensor::from_fn(dims, |_, _, _| rng.random::<f64>()).unwrap()
}

#[test]
fn product_form_equals_two_term_form() {
    let mut rng = seeded(2024);
    let p = SsimParams::default();
    for i in 0..100 {
        let dims = Dims::new(if i % 2 == 0 { 3 } else { 1 }, rng.random_range(4..24), rng.random_range(4..24));
        let x = random_image(&mut rng, dims);
        // Mix of unrelated and correlated pairs.
        let y = if i % 3 == 0 {
            random_image(&mut rng, dims)
        } else {
            let t: f64 = rng.random();
            ImageTensor::from_fn(dims, |c, yy, xx| x.get(c, yy, xx) * t + (1.0 - t) * rng.random::<f64>()).unwrap()
        };
        for params in [p, SsimParams::global()] {
            let a = ssim(&x, &y, &params).unwrap();
            let b = ssim_two_term(&x, &y, &params).unwrap();
            assert!((a - b).abs() <= 1e-12, "pair {i}: {a} vs {b}");
        }
    }
}

#[test]
fn identity_and_symmetry() {
    let mut rng = seeded(5);
    let p = SsimParams::default();
    for _ in 0..20 {
        let dims = Dims::new(3, rng.random_range(1..20), rng.random_range(1..20));
        let x = random_image(&mut rng, dims);
        let y = random_image(&mut rng, dims);
        assert_eq!(ssim(&x, &x, &p).unwrap(), 1.0);
        assert_eq!(ssim(&x, &y, &p).unwrap().to_bits(), ssim(&y, &x, &p).unwrap().to_bits());
    }
}
