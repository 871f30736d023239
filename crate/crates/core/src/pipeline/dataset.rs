//! Dataset layout: a directory of `.ppm` / `.uwtn` images plus an
//! `annotations.json` mapping file name to `{bbox: {x, y, w, h}, caption}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Annotation, PipelineError};

pub const ANNOTATIONS_FILE: &str = "annotations.json";

#[derive(Debug, Clone)]
pub struct DatasetImage {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    /// Sorted by file name.
    pub images: Vec<DatasetImage>,
    pub annotations: BTreeMap<String, Annotation>,
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("ppm") || e.eq_ignore_ascii_case("uwtn"))
}

pub fn load_dataset(dir: &Path) -> Result<Dataset, PipelineError> {
    if !dir.is_dir() {
        return Err(PipelineError::Dataset(format!("{} is not a directory", dir.display())));
    }
    let mut images = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && is_image(&path) {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            images.push(DatasetImage { name, path });
        }
    }
    if images.is_empty() {
        return Err(PipelineError::Dataset(format!("{} contains no .ppm or .uwtn images", dir.display())));
    }
    images.sort_by(|a, b| a.name.cmp(&b.name));
    let ann_path = dir.join(ANNOTATIONS_FILE);
    let annotations = if ann_path.exists() { read_annotations(&ann_path)? } else { BTreeMap::new() };
    Ok(Dataset { images, annotations })
}

pub fn read_annotations(path: &Path) -> Result<BTreeMap<String, Annotation>, PipelineError> {
    let raw = fs::read(path)?;
    serde_json::from_slice(&raw).map_err(|e| PipelineError::Dataset(format!("{}: {e}", path.display())))
}

pub fn write_annotations(path: &Path, annotations: &BTreeMap<String, Annotation>) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(annotations)
        .map_err(|e| PipelineError::Dataset(format!("serializing annotations: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{write_tensor, BBox, Dims, ImageTensor};

    #[test]
    fn loads_sorted_images_and_annotations() {
        let dir = tempfile::tempdir().unwrap();
        let t = ImageTensor::filled(Dims::new(3, 2, 2), 0.5).unwrap();
        for name in ["b.uwtn", "a.uwtn"] {
            write_tensor(dir.path().join(name), &t).unwrap();
        }
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let mut ann = BTreeMap::new();
        ann.insert("a.uwtn".to_string(), Annotation { bbox: BBox::new(0, 0, 1, 1), caption: "c".into() });
        write_annotations(&dir.path().join(ANNOTATIONS_FILE), &ann).unwrap();
        let ds = load_dataset(dir.path()).unwrap();
        assert_eq!(ds.images.iter().map(|i| i.name.as_str()).collect::<Vec<_>>(), ["a.uwtn", "b.uwtn"]);
        assert_eq!(ds.annotations, ann);
    }

    #[test]
    fn empty_or_missing_dirs_fail() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_dataset(dir.path()), Err(PipelineError::Dataset(_))));
        assert!(load_dataset(&dir.path().join("nope")).is_err());
    }

    #[test]
    fn annotation_json_shape() {
        let json = r#"{"x.ppm": {"bbox": {"x": 1, "y": 2, "w": 3, "h": 4}, "caption": "a diver"}}"#;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.json");
        fs::write(&p, json).unwrap();
        let ann = read_annotations(&p).unwrap();
        assert_eq!(ann["x.ppm"].bbox, BBox::new(1, 2, 3, 4));
    }
}
