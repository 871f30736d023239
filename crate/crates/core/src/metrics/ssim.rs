//! Structural similarity from its luminance, contrast and structure terms.

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::codec::ImageTensor;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SsimWindow {
    /// 11×11 Gaussian, σ = 1.5, edge-clamped; averaged over every position.
    #[default]
    Gaussian,
    /// Whole-channel statistics.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range L of the samples.
    pub dynamic_range: f64,
    pub window: SsimWindow,
    /// Exponent on the luminance term.
    pub alpha: f64,
    /// Exponent on the contrast term.
    pub beta: f64,
    /// Exponent on the structure term.
    pub gamma: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams { k1: 0.01, k2: 0.03, dynamic_range: 1.0, window: SsimWindow::Gaussian, alpha: 1.0, beta: 1.0, gamma: 1.0 }
    }
}

impl SsimParams {
    pub fn global() -> Self {
        SsimParams { window: SsimWindow::Global, ..SsimParams::default() }
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    pub fn c3(&self) -> f64 {
        self.c2() / 2.0
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        for (field, v) in [("k1", self.k1), ("k2", self.k2), ("dynamic_range", self.dynamic_range)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MetricsError::InvalidParams { field, reason: format!("{v} must be positive") });
            }
        }
        for (field, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MetricsError::InvalidParams { field, reason: format!("{v} must be positive") });
            }
        }
        Ok(())
    }
}

/// First and second moments of a pair of signals over one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalStats {
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

/// Second moments with cancellation error removed: variances clamped at
/// zero and the covariance clamped to `±σx·σy`. `σx·σy` is the square root
/// of the variance product, so it equals the variance when x and y coincide.
fn guarded_moments(st: &LocalStats) -> (f64, f64, f64, f64) {
    let var_x = st.var_x.max(0.0);
    let var_y = st.var_y.max(0.0);
    let sd_xy = (var_x * var_y).sqrt();
    (var_x, var_y, sd_xy, st.cov_xy.clamp(-sd_xy, sd_xy))
}

/// Luminance, contrast and structure comparisons `(l, c, s)`.
pub fn comparison_terms(st: &LocalStats, p: &SsimParams) -> (f64, f64, f64) {
    let (c1, c2, c3) = (p.c1(), p.c2(), p.c3());
    let (var_x, var_y, sd_xy, cov_xy) = guarded_moments(st);
    let l = (2.0 * st.mu_x * st.mu_y + c1) / (st.mu_x * st.mu_x + st.mu_y * st.mu_y + c1);
    let c = (2.0 * sd_xy + c2) / (var_x + var_y + c2);
    let s = (cov_xy + c3) / (sd_xy + c3);
    (l, c, s)
}

/// `l^α · c^β · s^γ`.
pub fn ssim_from_stats(st: &LocalStats, p: &SsimParams) -> f64 {
    let (l, c, s) = comparison_terms(st, p);
    let pow = |v: f64, e: f64| if e == 1.0 { v } else { v.powf(e) };
    pow(l, p.alpha) * pow(c, p.beta) * pow(s, p.gamma)
}

/// The closed form the three-term product reduces to when the exponents
/// are one and `C3 = C2 / 2`.
pub fn ssim_two_term_from_stats(st: &LocalStats, p: &SsimParams) -> f64 {
    let (c1, c2) = (p.c1(), p.c2());
    let (var_x, var_y, _, cov_xy) = guarded_moments(st);
    (2.0 * st.mu_x * st.mu_y + c1) * (2.0 * cov_xy + c2)
        / ((st.mu_x * st.mu_x + st.mu_y * st.mu_y + c1) * (var_x + var_y + c2))
}

const GAUSSIAN_RADIUS: usize = 5;
const GAUSSIAN_SIGMA: f64 = 1.5;

fn gaussian_kernel() -> [f64; 2 * GAUSSIAN_RADIUS + 1] {
    let mut k = [0.0; 2 * GAUSSIAN_RADIUS + 1];
    for (i, w) in k.iter_mut().enumerate() {
        let d = i as f64 - GAUSSIAN_RADIUS as f64;
        *w = (-d * d / (2.0 * GAUSSIAN_SIGMA * GAUSSIAN_SIGMA)).exp();
    }
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Separable Gaussian blur of one plane with replicated borders.
fn blur(plane: &[f64], h: usize, w: usize, kernel: &[f64]) -> Vec<f64> {
    let r = kernel.len() / 2;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;
    let mut tmp = vec![0.0; h * w];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..w {
            tmp[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(k, wt)| wt * row[clamp(x as isize + k as isize - r as isize, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(k, wt)| wt * tmp[clamp(y as isize + k as isize - r as isize, h) * w + x])
                .sum();
        }
    }
    out
}

fn check_pair(x: &ImageTensor, y: &ImageTensor, p: &SsimParams) -> Result<(), MetricsError> {
    p.validate()?;
    if x.dims() != y.dims() {
        return Err(MetricsError::DimMismatch(x.dims(), y.dims()));
    }
    // Tensors are finite by construction; this guards future constructors.
    for (name, t) in [("x", x), ("y", y)] {
        if t.data().iter().any(|v| !v.is_finite()) {
            return Err(MetricsError::NonFinite(name));
        }
    }
    Ok(())
}

/// Mean of `score(stats)` over all windows and channels.
fn mean_over_windows(
    x: &ImageTensor,
    y: &ImageTensor,
    p: &SsimParams,
    score: impl Fn(&LocalStats, &SsimParams) -> f64,
) -> Result<f64, MetricsError> {
    check_pair(x, y, p)?;
    let (h, w) = (x.height(), x.width());
    let mut total = 0.0;
    let mut count = 0usize;
    for c in 0..x.channels() {
        let (a, b) = (x.channel(c), y.channel(c));
        match p.window {
            SsimWindow::Global => {
                let n = a.len() as f64;
                let mu_x = a.iter().sum::<f64>() / n;
                let mu_y = b.iter().sum::<f64>() / n;
                let mut st = LocalStats { mu_x, mu_y, var_x: 0.0, var_y: 0.0, cov_xy: 0.0 };
                for (&u, &v) in a.iter().zip(b) {
                    st.var_x += (u - mu_x) * (u - mu_x);
                    st.var_y += (v - mu_y) * (v - mu_y);
                    st.cov_xy += (u - mu_x) * (v - mu_y);
                }
                st.var_x /= n;
                st.var_y /= n;
                st.cov_xy /= n;
                total += score(&st, p);
                count += 1;
            }
            SsimWindow::Gaussian => {
                let k = gaussian_kernel();
                let sq = |s: &[f64]| s.iter().map(|v| v * v).collect::<Vec<_>>();
                let prod: Vec<f64> = a.iter().zip(b).map(|(u, v)| u * v).collect();
                let mx = blur(a, h, w, &k);
                let my = blur(b, h, w, &k);
                let exx = blur(&sq(a), h, w, &k);
                let eyy = blur(&sq(b), h, w, &k);
                let exy = blur(&prod, h, w, &k);
                for i in 0..h * w {
                    let st = LocalStats {
                        mu_x: mx[i],
                        mu_y: my[i],
                        var_x: exx[i] - mx[i] * mx[i],
                        var_y: eyy[i] - my[i] * my[i],
                        cov_xy: exy[i] - mx[i] * my[i],
                    };
                    total += score(&st, p);
                }
                count += h * w;
            }
        }
    }
    Ok(total / count as f64)
}

/// SSIM of `x` against `y`, averaged over channels (and windows).
pub fn ssim(x: &ImageTensor, y: &ImageTensor, p: &SsimParams) -> Result<f64, MetricsError> {
    mean_over_windows(x, y, p, ssim_from_stats)
}

/// SSIM through the simplified two-term expression; agrees with [`ssim`]
/// for unit exponents.
pub fn ssim_two_term(x: &ImageTensor, y: &ImageTensor, p: &SsimParams) -> Result<f64, MetricsError> {
    mean_over_windows(x, y, p, ssim_two_term_from_stats)
}
