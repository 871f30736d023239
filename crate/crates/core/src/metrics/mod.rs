//! Fidelity metrics: SSIM, MSE/PSNR, box-prioritization loss, answer
//! cross-entropy and character error rate.

mod error;
mod loss;
mod pixel;
mod report;
mod ssim;

pub use error::MetricsError;
pub use loss::{bbox_prioritization_loss, char_error_rate, qa_cross_entropy};
pub use pixel::{mse, psnr_db, psnr_from_mse};
pub use report::MetricReport;
pub use ssim::{
    comparison_terms, ssim, ssim_from_stats, ssim_two_term, ssim_two_term_from_stats, LocalStats, SsimParams,
    SsimWindow,
};
