//! Image-plane operations: resampling, crop and paste, alpha fusion and
//! box overlap.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{BBox, CodecError, Dims, ImageTensor};

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("target dims {height}x{width} must both be at least 1")]
    ZeroTarget { height: usize, width: usize },
    #[error("shape mismatch: {left} vs {right}")]
    DimMismatch { left: Dims, right: Dims },
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error(transparent)]
    Geometry(#[from] CodecError),
}

/// Interpolation kernel for [`resample`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResamplePolicy {
    Nearest,
    #[default]
    Bilinear,
}

impl ResamplePolicy {
    pub fn name(self) -> &'static str {
        match self {
            ResamplePolicy::Nearest => "nearest",
            ResamplePolicy::Bilinear => "bilinear",
        }
    }
}

/// Per-axis bilinear taps: lower index, upper index, fraction toward upper.
fn bilinear_taps(out_len: usize, in_len: usize) -> Vec<(usize, usize, f64)> {
    let scale = in_len as f64 / out_len as f64;
    (0..out_len)
        .map(|i| {
            // Pixel centers at (i + 0.5) / N, edge-clamped.
            let src = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (in_len - 1) as f64);
            let lo = src.floor() as usize;
            let hi = (lo + 1).min(in_len - 1);
            (lo, hi, src - lo as f64)
        })
        .collect()
}

fn nearest_taps(out_len: usize, in_len: usize) -> Vec<usize> {
    let scale = in_len as f64 / out_len as f64;
    (0..out_len).map(|i| (((i as f64 + 0.5) * scale).floor() as usize).min(in_len - 1)).collect()
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Resamples every channel to `out_h × out_w`.
pub fn resample(
    t: &ImageTensor,
    out_h: usize,
    out_w: usize,
    policy: ResamplePolicy,
) -> Result<ImageTensor, ImagingError> {
    if out_h == 0 || out_w == 0 {
        return Err(ImagingError::ZeroTarget { height: out_h, width: out_w });
    }
    let dims = Dims::new(t.channels(), out_h, out_w);
    let mut data = Vec::with_capacity(dims.sample_count());
    match policy {
        ResamplePolicy::Nearest => {
            let ys = nearest_taps(out_h, t.height());
            let xs = nearest_taps(out_w, t.width());
            for c in 0..t.channels() {
                for &sy in &ys {
                    data.extend(xs.iter().map(|&sx| t.get(c, sy, sx)));
                }
            }
        }
        ResamplePolicy::Bilinear => {
            let ys = bilinear_taps(out_h, t.height());
            let xs = bilinear_taps(out_w, t.width());
            for c in 0..t.channels() {
                for &(y0, y1, ty) in &ys {
                    for &(x0, x1, tx) in &xs {
                        let (a, b) = (t.get(c, y0, x0), t.get(c, y0, x1));
                        let (p, q) = (t.get(c, y1, x0), t.get(c, y1, x1));
                        let v = lerp(lerp(a, b, tx), lerp(p, q, tx), ty);
                        let lo = a.min(b).min(p.min(q));
                        let hi = a.max(b).max(p.max(q));
                        data.push(v.clamp(lo, hi));
                    }
                }
            }
        }
    }
    Ok(ImageTensor::from_raw(dims, data))
}

/// Copies the samples under `b`.
pub fn crop(t: &ImageTensor, b: &BBox) -> Result<ImageTensor, ImagingError> {
    b.validate_within(t.width(), t.height())?;
    let (x0, y0, w, h) = (b.x as usize, b.y as usize, b.w as usize, b.h as usize);
    let dims = Dims::new(t.channels(), h, w);
    let mut data = Vec::with_capacity(dims.sample_count());
    for c in 0..t.channels() {
        let plane = t.channel(c);
        for y in y0..y0 + h {
            let row = y * t.width();
            data.extend_from_slice(&plane[row + x0..row + x0 + w]);
        }
    }
    Ok(ImageTensor::from_raw(dims, data))
}

/// Returns `canvas` with the region `b` overwritten by `patch`.
pub fn paste(canvas: &ImageTensor, patch: &ImageTensor, b: &BBox) -> Result<ImageTensor, ImagingError> {
    b.validate_within(canvas.width(), canvas.height())?;
    let expected = Dims::new(canvas.channels(), b.h as usize, b.w as usize);
    if patch.dims() != expected {
        return Err(ImagingError::DimMismatch { left: expected, right: patch.dims() });
    }
    let mut out = canvas.clone();
    for c in 0..canvas.channels() {
        for y in 0..b.h as usize {
            for x in 0..b.w as usize {
                out.set(c, b.y as usize + y, b.x as usize + x, patch.get(c, y, x));
            }
        }
    }
    Ok(out)
}

/// Weights `(w_key, w_context)` with `w_key + w_context == 1` exactly.
///
/// For alpha below one half the key weight is derived from the rounded
/// context weight, which keeps `blend(a, b, α)` and `blend(b, a, 1 − α)`
/// bit-identical.
fn blend_weights(alpha: f64) -> (f64, f64) {
    if alpha >= 0.5 {
        (alpha, 1.0 - alpha)
    } else {
        let context = 1.0 - alpha;
        (1.0 - context, context)
    }
}

/// Per-sample `α·f_k + (1 − α)·f_ci`.
pub fn alpha_blend(f_k: &ImageTensor, f_ci: &ImageTensor, alpha: f64) -> Result<ImageTensor, ImagingError> {
    if f_k.dims() != f_ci.dims() {
        return Err(ImagingError::DimMismatch { left: f_k.dims(), right: f_ci.dims() });
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ImagingError::AlphaOutOfRange(alpha));
    }
    let (wk, wc) = blend_weights(alpha);
    let data = f_k
        .data()
        .iter()
        .zip(f_ci.data())
        .map(|(&k, &c)| if k == c { k } else { (wk * k + wc * c).clamp(k.min(c), k.max(c)) })
        .collect();
    Ok(ImageTensor::from_raw(f_k.dims(), data))
}

/// Intersection over union with half-open pixel areas.
pub fn iou(a: &BBox, b: &BBox) -> Result<f64, ImagingError> {
    a.validate()?;
    b.validate()?;
    let inter = a.intersection_area(b);
    let union = a.area() + b.area() - inter;
    Ok(inter as f64 / union as f64)
}

/// Output size for shrinking an `h × w` region into a `budget_h × budget_w`
/// grid with its aspect ratio preserved. Never upscales.
pub fn fit_within(h: usize, w: usize, budget_h: usize, budget_w: usize) -> (usize, usize) {
    let scale = (budget_h as f64 / h as f64).min(budget_w as f64 / w as f64).min(1.0);
    scale_dims(h, w, scale)
}

/// `h × w` scaled by `scale`, rounded, at least one pixel per side.
pub fn scale_dims(h: usize, w: usize, scale: f64) -> (usize, usize) {
    let s = |n: usize| ((n as f64 * scale).round() as usize).clamp(1, n.max(1));
    (s(h), s(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> ImageTensor {
        ImageTensor::from_fn(Dims::new(1, 4, 4), |_, y, x| (y * 4 + x) as f64 / 15.0).unwrap()
    }

    #[test]
    fn ramp_downsample_hand_values() {
        // Output centers land halfway between input pixel pairs, so each
        // output equals the mean of a 2×2 block.
        let out = resample(&ramp(), 2, 2, ResamplePolicy::Bilinear).unwrap();
        let expected = [2.5 / 15.0, 4.5 / 15.0, 10.5 / 15.0, 12.5 / 15.0];
        for (v, e) in out.data().iter().zip(expected) {
            assert!((v - e).abs() < 1e-15, "{v} vs {e}");
        }
    }

    #[test]
    fn identity_resample_is_exact() {
        let t = ramp();
        assert!(resample(&t, 4, 4, ResamplePolicy::Nearest).unwrap().bit_eq(&t));
        assert!(resample(&t, 4, 4, ResamplePolicy::Bilinear).unwrap().bit_eq(&t));
    }

    #[test]
    fn constants_survive_any_size() {
        let t = ImageTensor::filled(Dims::new(3, 7, 5), 0.3).unwrap();
        for (h, w) in [(1, 1), (3, 11), (14, 10), (64, 2)] {
            for policy in [ResamplePolicy::Nearest, ResamplePolicy::Bilinear] {
                let out = resample(&t, h, w, policy).unwrap();
                assert!(out.data().iter().all(|&v| v == 0.3));
            }
        }
    }

    #[test]
    fn upsample_interpolates() {
        let t = ImageTensor::new(Dims::new(1, 1, 2), vec![0.0, 1.0]).unwrap();
        let out = resample(&t, 1, 4, ResamplePolicy::Bilinear).unwrap();
        assert_eq!(out.data(), &[0.0, 0.25, 0.75, 1.0]);
        let near = resample(&t, 1, 4, ResamplePolicy::Nearest).unwrap();
        assert_eq!(near.data(), &[0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_target_rejected() {
        assert!(matches!(resample(&ramp(), 0, 2, ResamplePolicy::Bilinear), Err(ImagingError::ZeroTarget { .. })));
    }

    #[test]
    fn crop_cases() {
        let t = ramp();
        assert!(crop(&t, &BBox::full(4, 4)).unwrap().bit_eq(&t));
        let px = crop(&t, &BBox::new(2, 1, 1, 1)).unwrap();
        assert_eq!(px.data(), &[6.0 / 15.0]);
        assert!(crop(&t, &BBox::new(3, 3, 2, 1)).is_err());
    }

    #[test]
    fn paste_cases() {
        let t = ramp();
        let b = BBox::new(1, 1, 2, 3);
        let canvas = ImageTensor::filled(t.dims(), 0.0).unwrap();
        let pasted = paste(&canvas, &crop(&t, &b).unwrap(), &b).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let inside = (1..3).contains(&x) && (1..4).contains(&y);
                assert_eq!(pasted.get(0, y, x), if inside { t.get(0, y, x) } else { 0.0 });
            }
        }
        assert!(paste(&t, &crop(&t, &b).unwrap(), &b).unwrap().bit_eq(&t));
        let wrong = ImageTensor::filled(Dims::new(1, 2, 2), 0.0).unwrap();
        assert!(matches!(paste(&t, &wrong, &b), Err(ImagingError::DimMismatch { .. })));
    }

    #[test]
    fn blend_limits() {
        let a = ramp();
        let b = ImageTensor::from_fn(a.dims(), |_, y, x| ((x * 7 + y * 3) % 5) as f64 / 4.0).unwrap();
        assert!(alpha_blend(&a, &b, 1.0).unwrap().bit_eq(&a));
        assert!(alpha_blend(&a, &b, 0.0).unwrap().bit_eq(&b));
        for alpha in [0.0, 0.1, 0.3, 0.5, 0.77, 1.0] {
            assert!(alpha_blend(&a, &a, alpha).unwrap().bit_eq(&a));
        }
        assert!(matches!(alpha_blend(&a, &b, 1.5), Err(ImagingError::AlphaOutOfRange(_))));
        assert!(alpha_blend(&a, &ImageTensor::filled(Dims::new(1, 2, 2), 0.0).unwrap(), 0.5).is_err());
    }

    #[test]
    fn iou_cases() {
        let a = BBox::new(0, 0, 2, 2);
        assert_eq!(iou(&a, &a).unwrap(), 1.0);
        assert_eq!(iou(&a, &BBox::new(5, 5, 2, 2)).unwrap(), 0.0);
        assert!((iou(&a, &BBox::new(1, 0, 2, 2)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(iou(&a, &BBox::new(0, 0, 0, 2)).is_err());
    }

    #[test]
    fn budget_fitting() {
        assert_eq!(fit_within(256, 256, 64, 64), (64, 64));
        assert_eq!(fit_within(200, 100, 64, 64), (64, 32));
        assert_eq!(fit_within(30, 40, 64, 64), (30, 40));
        assert_eq!(fit_within(1000, 3, 64, 64), (64, 1));
    }
}
