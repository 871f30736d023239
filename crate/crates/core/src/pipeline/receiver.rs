use std::path::Path;

use super::external::{external_codec_call, CallLog, ExternalCommand, ExternalRequest, ExternalResponse};
use super::{Method, PipelineError};
use crate::codec::{ImageTensor, SemanticPayload};
use crate::imaging::{self, ImagingError, ResamplePolicy};

/// Receiver-side decoder.
#[derive(Debug, Clone)]
pub enum Reconstructor {
    UpsampleOnly,
    Composite,
    External(ExternalCommand),
}

impl Reconstructor {
    pub fn method(&self) -> Method {
        match self {
            Reconstructor::UpsampleOnly => Method::UpsampleOnly,
            Reconstructor::Composite => Method::Composite,
            Reconstructor::External(_) => Method::External,
        }
    }
}

/// Compressed frame upsampled to the original dims.
pub fn upsample_only(p: &SemanticPayload, policy: ResamplePolicy) -> Result<ImageTensor, ImagingError> {
    imaging::resample(&p.hc_image, p.original_dims.height, p.original_dims.width, policy)
}

/// Upsampled frame with the key region fused back in at its box:
/// `α · key + (1 − α) · context` inside the box, context elsewhere.
pub fn composite(p: &SemanticPayload, alpha: f64, policy: ResamplePolicy) -> Result<ImageTensor, ImagingError> {
    let base = upsample_only(p, policy)?;
    let b = p.key_bbox;
    let key = imaging::resample(&p.key_region, b.h as usize, b.w as usize, policy)?;
    let context = imaging::crop(&base, &b)?;
    let fused = imaging::alpha_blend(&key, &context, alpha)?;
    imaging::paste(&base, &fused, &b)
}

/// Recovers the full frame from a (possibly corrupted) payload.
pub fn reconstruct(
    p: &SemanticPayload,
    r: &Reconstructor,
    alpha: f64,
    policy: ResamplePolicy,
    workdir: Option<&Path>,
) -> Result<(ImageTensor, CallLog), PipelineError> {
    match r {
        Reconstructor::UpsampleOnly => Ok((upsample_only(p, policy)?, CallLog::default())),
        Reconstructor::Composite => Ok((composite(p, alpha, policy)?, CallLog::default())),
        Reconstructor::External(command) => {
            let workdir = workdir
                .ok_or_else(|| PipelineError::Config("an external reconstructor needs a work directory".into()))?;
            let request = ExternalRequest::Reconstructor { payload: p, alpha };
            match external_codec_call(&request, command, workdir)? {
                (ExternalResponse::Image(img), log) => Ok((img, log)),
                (ExternalResponse::Region(_), _) => unreachable!("reconstructor calls return images"),
            }
        }
    }
}
