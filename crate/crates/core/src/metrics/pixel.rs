use super::MetricsError;
use crate::codec::ImageTensor;

pub fn mse(x: &ImageTensor, y: &ImageTensor) -> Result<f64, MetricsError> {
    if x.dims() != y.dims() {
        return Err(MetricsError::DimMismatch(x.dims(), y.dims()));
    }
    let sum: f64 = x.data().iter().zip(y.data()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / x.data().len() as f64)
}

/// `10·log10(L² / mse)`; `+inf` for identical images.
pub fn psnr_db(x: &ImageTensor, y: &ImageTensor, dynamic_range: f64) -> Result<f64, MetricsError> {
    let m = mse(x, y)?;
    Ok(psnr_from_mse(m, dynamic_range))
}

pub fn psnr_from_mse(mse: f64, dynamic_range: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (dynamic_range * dynamic_range / mse).log10()
    }
}
