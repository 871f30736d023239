use std::path::Path;

use super::external::CallLog;
use super::{Geometry, KeyScaling, PipelineError, Region, RegionProvider};
use crate::codec::{payload_size_bytes, raw_size_bytes, ImageTensor, SemanticPayload, WirePrecision};
use crate::imaging::{self, ResamplePolicy};

/// Transmitted height and width of a key region of `h × w` pixels.
pub fn key_region_size(geometry: &Geometry, h: usize, w: usize) -> (usize, usize) {
    let (bh, bw) = (geometry.key_budget_height, geometry.key_budget_width);
    match geometry.key_scaling {
        KeyScaling::FitBudget => imaging::fit_within(h, w, bh, bw),
        KeyScaling::FrameRelative => {
            let scale = (bh as f64 / geometry.original.height as f64)
                .min(bw as f64 / geometry.original.width as f64)
                .min(1.0);
            let (kh, kw) = imaging::scale_dims(h, w, scale);
            (kh.min(bh), kw.min(bw))
        }
    }
}

/// Builds the payload for an image whose key region is already known.
pub fn assemble_payload(
    image: &ImageTensor,
    region: &Region,
    geometry: &Geometry,
    policy: ResamplePolicy,
) -> Result<SemanticPayload, PipelineError> {
    if image.dims() != geometry.original {
        return Err(PipelineError::UnexpectedDims { expected: geometry.original, actual: image.dims() });
    }
    let crop = imaging::crop(image, &region.bbox)?;
    let (kh, kw) = key_region_size(geometry, crop.height(), crop.width());
    let key_region = imaging::resample(&crop, kh, kw, policy)?;
    let hc_image = imaging::resample(image, geometry.hc_height, geometry.hc_width, policy)?;
    let payload = SemanticPayload {
        answer_text: region.caption.as_bytes().to_vec(),
        key_region,
        key_bbox: region.bbox,
        hc_image,
        original_dims: image.dims(),
    };
    payload.validate()?;
    let (size, raw) = (payload_size_bytes(&payload), raw_size_bytes(image.dims(), WirePrecision::F64));
    if size >= raw {
        return Err(PipelineError::NoCompression { payload: size, raw });
    }
    Ok(payload)
}

/// Transmitter side: locate the key region, crop and shrink it, compress
/// the whole frame, and assemble the payload.
pub fn encode_transmitter(
    image: &ImageTensor,
    image_id: &str,
    provider: &RegionProvider,
    geometry: &Geometry,
    policy: ResamplePolicy,
    workdir: Option<&Path>,
) -> Result<(SemanticPayload, Region, CallLog), PipelineError> {
    if image.dims() != geometry.original {
        return Err(PipelineError::UnexpectedDims { expected: geometry.original, actual: image.dims() });
    }
    let (region, log) = provider.locate(image_id, image, workdir)?;
    let payload = assemble_payload(image, &region, geometry, policy)?;
    Ok((payload, region, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{BBox, Dims};

    fn scene(dims: Dims) -> ImageTensor {
        ImageTensor::from_fn(dims, |c, y, x| ((x * 3 + y * 5 + c * 7) % 13) as f64 / 12.0).unwrap()
    }

    #[test]
    fn fit_budget_fills_the_budget() {
        let g = Geometry { key_scaling: KeyScaling::FitBudget, ..Geometry::default() };
        let img = scene(g.original);
        let region = Region { bbox: BBox::new(128, 128, 256, 256), caption: "a turtle".into() };
        let p = assemble_payload(&img, &region, &g, ResamplePolicy::Bilinear).unwrap();
        assert_eq!(p.key_bbox, region.bbox);
        assert_eq!(p.key_region.dims(), Dims::new(3, 64, 64));
        assert_eq!(p.hc_image.dims(), Dims::new(3, 32, 32));
        assert_eq!(p.answer_text, b"a turtle");
        assert_eq!(p.original_dims, g.original);
    }

    #[test]
    fn small_boxes_are_not_upscaled() {
        let g = Geometry { key_scaling: KeyScaling::FitBudget, ..Geometry::default() };
        let img = scene(g.original);
        let region = Region { bbox: BBox::new(10, 20, 30, 40), caption: String::new() };
        let p = assemble_payload(&img, &region, &g, ResamplePolicy::Bilinear).unwrap();
        assert_eq!(p.key_region.dims(), Dims::new(3, 40, 30));
        assert!(p.key_region.bit_eq(&imaging::crop(&img, &region.bbox).unwrap()));
    }

    #[test]
    fn frame_relative_scaling() {
        let g = Geometry::default();
        assert_eq!(g.key_scaling, KeyScaling::FrameRelative);
        assert_eq!(key_region_size(&g, 256, 256), (32, 32));
        assert_eq!(key_region_size(&g, 271, 271), (34, 34));
        assert_eq!(key_region_size(&g, 512, 100), (64, 13));
        assert_eq!(key_region_size(&g, 4, 4), (1, 1));
    }

    #[test]
    fn default_encode_is_under_one_percent() {
        let g = Geometry::default();
        let img = scene(g.original);
        let region = Region { bbox: BBox::new(120, 120, 271, 271), caption: "c".repeat(83) };
        let p = assemble_payload(&img, &region, &g, ResamplePolicy::Bilinear).unwrap();
        assert_eq!(p.key_region.dims(), Dims::new(3, 34, 34));
        assert_eq!(payload_size_bytes(&p), 83 + 24_576 + 3 * 34 * 34 * 8);
        assert!((payload_size_bytes(&p) as f64) < 0.01 * raw_size_bytes(g.original, WirePrecision::F64) as f64);
    }

    #[test]
    fn wrong_dims_rejected() {
        let g = Geometry::default();
        let img = scene(Dims::new(3, 64, 64));
        let region = Region { bbox: BBox::new(0, 0, 8, 8), caption: String::new() };
        assert!(matches!(
            assemble_payload(&img, &region, &g, ResamplePolicy::Bilinear),
            Err(PipelineError::UnexpectedDims { .. })
        ));
    }
}
