//! SUIM import: color-coded segmentation masks to one bounding box and
//! caption per image.
//!
//! Mask colors encode eight categories as thresholded RGB bits. Background
//! water (black) is never a key region. The key region is the tight box of
//! the largest 4-connected component of any other category; ties keep the
//! component found first in raster order.

use std::collections::{BTreeMap, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};

use uwsemsim::codec::{self, BBox, Dims, ImageTensor};
use uwsemsim::imaging::{self, ResamplePolicy};
use uwsemsim::pipeline::{write_annotations, Annotation, ANNOTATIONS_FILE};

use crate::CliError;

pub const CATEGORIES: [&str; 8] = [
    "background waterbody",
    "human divers",
    "aquatic plants and sea-grass",
    "wrecks and ruins",
    "robots",
    "reefs and invertebrates",
    "fish and vertebrates",
    "sea-floor and rocks",
];

const IMAGE_EXTS: [&str; 5] = ["jpg", "jpeg", "png", "bmp", "ppm"];
const MASK_EXTS: [&str; 3] = ["bmp", "png", "jpg"];

/// Per-pixel category codes of an RGB mask.
pub fn mask_labels(rgb: &image::RgbImage) -> Vec<u8> {
    rgb.pixels()
        .map(|p| (u8::from(p[0] >= 128) << 2) | (u8::from(p[1] >= 128) << 1) | u8::from(p[2] >= 128))
        .collect()
}

/// Largest 4-connected non-background component: its category, pixel count and box.
pub fn largest_region(labels: &[u8], width: usize, height: usize) -> Option<(u8, usize, BBox)> {
    let mut seen = vec![false; labels.len()];
    let mut best: Option<(u8, usize, BBox)> = None;
    let mut queue = VecDeque::new();
    for start in 0..labels.len() {
        if seen[start] || labels[start] == 0 {
            continue;
        }
        let label = labels[start];
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
        let mut count = 0;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % width, i / width);
            count += 1;
            (x0, y0, x1, y1) = (x0.min(x), y0.min(y), x1.max(x), y1.max(y));
            let mut visit = |j: usize| {
                if !seen[j] && labels[j] == label {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < width {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - width);
            }
            if y + 1 < height {
                visit(i + width);
            }
        }
        if best.as_ref().is_none_or(|b| count > b.1) {
            let bbox = BBox::new(x0 as u32, y0 as u32, (x1 - x0 + 1) as u32, (y1 - y0 + 1) as u32);
            best = Some((label, count, bbox));
        }
    }
    best
}

pub fn caption_for(category: u8) -> String {
    format!("an image containing {}", CATEGORIES[category as usize])
}

/// Box scaled from a `w × h` frame to `tw × th`, rounded outward.
pub fn scale_bbox(b: &BBox, w: usize, h: usize, tw: usize, th: usize) -> BBox {
    let sx = tw as f64 / w as f64;
    let sy = th as f64 / h as f64;
    let x0 = ((b.x as f64 * sx).floor() as usize).min(tw - 1);
    let y0 = ((b.y as f64 * sy).floor() as usize).min(th - 1);
    let x1 = ((b.right() as f64 * sx).ceil() as usize).clamp(x0 + 1, tw);
    let y1 = ((b.bottom() as f64 * sy).ceil() as usize).clamp(y0 + 1, th);
    BBox::new(x0 as u32, y0 as u32, (x1 - x0) as u32, (y1 - y0) as u32)
}

fn rgb_to_tensor(rgb: &image::RgbImage) -> ImageTensor {
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    ImageTensor::from_fn(Dims::new(3, h, w), |c, y, x| f64::from(rgb.get_pixel(x as u32, y as u32)[c]) / 255.0)
        .expect("8-bit samples are in range")
}

fn has_ext(p: &Path, exts: &[&str]) -> bool {
    p.extension().and_then(|e| e.to_str()).is_some_and(|e| exts.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

fn find_mask(mask_dir: &Path, stem: &str) -> Option<PathBuf> {
    MASK_EXTS.iter().map(|e| mask_dir.join(format!("{stem}.{e}"))).find(|p| p.is_file())
}

#[derive(Debug, Default)]
pub struct ImportSummary {
    pub imported: usize,
    /// `(file, reason)` for every skipped image.
    pub skipped: Vec<(String, String)>,
    pub log: Vec<String>,
}

fn import_one(
    img_path: &Path,
    mask_dir: &Path,
    resize: Option<(usize, usize)>,
) -> Result<(ImageTensor, Annotation), String> {
    let stem = img_path.file_stem().unwrap().to_string_lossy();
    let mask_path = find_mask(mask_dir, &stem).ok_or("no mask")?;
    let mask = image::open(&mask_path).map_err(|e| format!("unreadable mask {}: {e}", mask_path.display()))?.to_rgb8();
    let img = if has_ext(img_path, &["ppm"]) {
        codec::read_ppm(img_path).map_err(|e| format!("unreadable image: {e}"))?
    } else {
        rgb_to_tensor(&image::open(img_path).map_err(|e| format!("unreadable image: {e}"))?.to_rgb8())
    };
    let (mw, mh) = (mask.width() as usize, mask.height() as usize);
    let (region_label, _, mbox) = largest_region(&mask_labels(&mask), mw, mh).ok_or("empty mask")?;
    // Masks may be stored at a different size than their image.
    let bbox = if (mw, mh) == (img.width(), img.height()) {
        mbox
    } else {
        scale_bbox(&mbox, mw, mh, img.width(), img.height())
    };
    let (img, bbox) = match resize {
        Some((tw, th)) if (tw, th) != (img.width(), img.height()) => {
            let out = imaging::resample(&img, th, tw, ResamplePolicy::Bilinear).map_err(|e| e.to_string())?;
            (out, scale_bbox(&bbox, img.width(), img.height(), tw, th))
        }
        _ => (img, bbox),
    };
    Ok((img, Annotation { bbox, caption: caption_for(region_label) }))
}

/// Imports `src` (either `images/` + `masks/` subdirectories, or images at
/// the top level with a `masks/` subdirectory) into a dataset at `dst`.
pub fn import_suim(src: &Path, dst: &Path, resize: Option<(usize, usize)>) -> Result<ImportSummary, CliError> {
    let image_dir = if src.join("images").is_dir() { src.join("images") } else { src.to_path_buf() };
    let mask_dir = src.join("masks");
    if !mask_dir.is_dir() {
        return Err(CliError::Config(format!("{} has no masks/ directory", src.display())));
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(&image_dir)
        .map_err(|e| CliError::io(image_dir.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && has_ext(p, &IMAGE_EXTS))
        .collect();
    paths.sort();
    fs::create_dir_all(dst).map_err(|e| CliError::io(dst.display(), e))?;

    let mut summary = ImportSummary::default();
    let mut annotations = BTreeMap::new();
    for path in &paths {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        match import_one(path, &mask_dir, resize) {
            Ok((img, ann)) => {
                let name = format!("{}.ppm", path.file_stem().unwrap().to_string_lossy());
                if annotations.contains_key(&name) {
                    summary.skipped.push((file.clone(), format!("duplicate output name {name}")));
                    summary.log.push(format!("skip {file}: duplicate output name {name}"));
                    continue;
                }
                codec::write_ppm(dst.join(&name), &img)?;
                summary.log.push(format!("ok {file} -> {name} bbox {} \"{}\"", ann.bbox, ann.caption));
                annotations.insert(name, ann);
                summary.imported += 1;
            }
            Err(reason) => {
                log::warn!("skipping {file}: {reason}");
                summary.log.push(format!("skip {file}: {reason}"));
                summary.skipped.push((file, reason));
            }
        }
    }
    write_annotations(&dst.join(ANNOTATIONS_FILE), &annotations)?;
    let mut text = summary.log.join("\n");
    text.push('\n');
    fs::write(dst.join("import.log"), text).map_err(|e| CliError::io("import.log", e))?;
    Ok(summary)
}
