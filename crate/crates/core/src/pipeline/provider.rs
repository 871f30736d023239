use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::external::{external_codec_call, CallLog, ExternalCommand, ExternalRequest, ExternalResponse};
use super::PipelineError;
use crate::codec::{BBox, ImageTensor};

/// Ground-truth key region of a dataset image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub bbox: BBox,
    pub caption: String,
}

/// One key region and its caption, as chosen by a provider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub bbox: BBox,
    pub caption: String,
}

/// Source of the key region and answer text for each image.
#[derive(Debug, Clone)]
pub enum RegionProvider {
    Oracle { annotations: BTreeMap<String, Annotation> },
    CenterFallback { area_fraction: f64, annotations: BTreeMap<String, Annotation>, fallback_caption: String },
    External { command: ExternalCommand, query: String },
}

impl RegionProvider {
    /// Region for `image_id`. External providers run inside `workdir`.
    pub fn locate(
        &self,
        image_id: &str,
        image: &ImageTensor,
        workdir: Option<&Path>,
    ) -> Result<(Region, CallLog), PipelineError> {
        match self {
            RegionProvider::Oracle { annotations } => {
                let a = annotations.get(image_id).ok_or_else(|| PipelineError::MissingAnnotation(image_id.into()))?;
                a.bbox.validate_within(image.width(), image.height())?;
                Ok((Region { bbox: a.bbox, caption: a.caption.clone() }, CallLog::default()))
            }
            RegionProvider::CenterFallback { area_fraction, annotations, fallback_caption } => {
                let caption = annotations.get(image_id).map_or_else(|| fallback_caption.clone(), |a| a.caption.clone());
                let bbox = center_box(image.width(), image.height(), *area_fraction);
                Ok((Region { bbox, caption }, CallLog::default()))
            }
            RegionProvider::External { command, query } => {
                let workdir = workdir.ok_or_else(|| {
                    PipelineError::Config("an external provider needs a work directory".into())
                })?;
                let request = ExternalRequest::Provider { image, query };
                match external_codec_call(&request, command, workdir)? {
                    (ExternalResponse::Region(r), log) => Ok((r, log)),
                    (ExternalResponse::Image(_), _) => unreachable!("provider calls return regions"),
                }
            }
        }
    }
}

/// Centered box whose sides are the frame's sides scaled by
/// `sqrt(area_fraction)`, rounded to whole pixels.
pub fn center_box(width: usize, height: usize, area_fraction: f64) -> BBox {
    let side = area_fraction.sqrt();
    let w = ((width as f64 * side).round() as usize).clamp(1, width);
    let h = ((height as f64 * side).round() as usize).clamp(1, height);
    BBox::new(((width - w) / 2) as u32, ((height - h) / 2) as u32, w as u32, h as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Dims;

    #[test]
    fn center_box_on_default_frame() {
        let b = center_box(512, 512, 0.28);
        assert_eq!((b.w, b.h), (271, 271));
        assert_eq!((b.x, b.y), (120, 120));
        let ratio = b.area() as f64 / (512.0 * 512.0);
        // One pixel of rounding on each side.
        assert!((ratio - 0.28).abs() < 2.0 * 272.0 / (512.0 * 512.0), "{ratio}");
        assert!(b.validate_within(512, 512).is_ok());
    }

    #[test]
    fn center_box_degenerate_frames() {
        assert_eq!(center_box(1, 1, 0.28), BBox::new(0, 0, 1, 1));
        assert!(center_box(3, 100, 0.28).validate_within(3, 100).is_ok());
    }

    #[test]
    fn oracle_lookup() {
        let img = ImageTensor::filled(Dims::new(3, 16, 16), 0.5).unwrap();
        let mut annotations = BTreeMap::new();
        annotations.insert("a.ppm".to_string(), Annotation { bbox: BBox::new(1, 2, 3, 4), caption: "a fish".into() });
        annotations.insert("bad.ppm".to_string(), Annotation { bbox: BBox::new(10, 10, 10, 10), caption: "x".into() });
        let p = RegionProvider::Oracle { annotations };
        let (r, _) = p.locate("a.ppm", &img, None).unwrap();
        assert_eq!(r.bbox, BBox::new(1, 2, 3, 4));
        assert_eq!(r.caption, "a fish");
        assert!(matches!(p.locate("b.ppm", &img, None), Err(PipelineError::MissingAnnotation(_))));
        assert!(p.locate("bad.ppm", &img, None).is_err());
    }
}
