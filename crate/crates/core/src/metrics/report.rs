use serde::Serialize;

/// Scores for one reconstructed image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub ssim: f64,
    #[serde(serialize_with = "crate::serde_float::serialize")]
    pub psnr_db: f64,
    pub mse: f64,
    /// `1 − IoU` of the transmitted box against the annotation, when one exists.
    #[serde(serialize_with = "crate::serde_float::option::serialize")]
    pub iou_loss: Option<f64>,
    #[serde(serialize_with = "crate::serde_float::option::serialize")]
    pub char_error_rate: Option<f64>,
    pub payload_bytes: u64,
}
