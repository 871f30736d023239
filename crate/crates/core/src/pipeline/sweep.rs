//! Sweep driver: encode each image once, then run every
//! (snr, method, alpha) cell on its own derived seed.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::external::CallLog;
use super::report::{Aggregate, OperatingPointEntry, SweepReport, SweepRow};
use super::{
    channel_pass, encode_transmitter, load_dataset, reconstruct, Annotation, Dataset, Method, PipelineError,
    ProviderMode, Reconstructor, RegionProvider, SweepConfig,
};
use crate::channel::snr_to_range;
use crate::codec::{self, payload_size_bytes_with, ImageTensor, SemanticPayload, BBox};
use crate::metrics::{self, MetricReport};
use crate::rng::{derive_seed, RNG_ALGORITHM};

/// Region provider described by the config, fed with the dataset's annotations.
pub fn build_provider(cfg: &SweepConfig, dataset: &Dataset) -> Result<RegionProvider, PipelineError> {
    let p = &cfg.provider;
    Ok(match p.mode {
        ProviderMode::Oracle => RegionProvider::Oracle { annotations: dataset.annotations.clone() },
        ProviderMode::CenterFallback => RegionProvider::CenterFallback {
            area_fraction: p.fallback_area_fraction,
            annotations: dataset.annotations.clone(),
            fallback_caption: p.fallback_caption.clone(),
        },
        ProviderMode::External => RegionProvider::External {
            command: p.external.clone().ok_or_else(|| PipelineError::Config("missing provider command".into()))?,
            query: p.query.clone(),
        },
    })
}

pub fn build_reconstructor(cfg: &SweepConfig, method: Method) -> Result<Reconstructor, PipelineError> {
    Ok(match method {
        Method::UpsampleOnly => Reconstructor::UpsampleOnly,
        Method::Composite => Reconstructor::Composite,
        Method::External => Reconstructor::External(
            cfg.reconstructor.clone().ok_or_else(|| PipelineError::Config("missing reconstructor command".into()))?,
        ),
    })
}

/// Channel sub-seed of a cell. Alpha is not part of the path, so an alpha
/// sweep sees the same corruption at every alpha.
pub fn cell_seed(seed: u64, image_index: usize, snr_index: usize, method_index: usize) -> u64 {
    derive_seed(seed, &[image_index as u64, snr_index as u64, method_index as u64])
}

/// Scores a reconstruction against the original and the sent payload.
pub fn score(
    original: &ImageTensor,
    recon: &ImageTensor,
    sent: &SemanticPayload,
    received_text: &[u8],
    truth: Option<&BBox>,
    cfg: &SweepConfig,
) -> Result<MetricReport, PipelineError> {
    let mse = metrics::mse(original, recon)?;
    let iou_loss = match truth {
        Some(t) => Some(metrics::bbox_prioritization_loss(&[sent.key_bbox], &[*t])?),
        None => None,
    };
    Ok(MetricReport {
        ssim: metrics::ssim(original, recon, &cfg.ssim)?,
        psnr_db: metrics::psnr_from_mse(mse, cfg.ssim.dynamic_range),
        mse,
        iou_loss,
        char_error_rate: Some(metrics::char_error_rate(&sent.answer_text, received_text)?),
        payload_bytes: payload_size_bytes_with(sent, cfg.wire_precision),
    })
}

struct Encoded {
    image: ImageTensor,
    payload: SemanticPayload,
    truth: Option<BBox>,
    log: Vec<String>,
}

fn encode_one(
    cfg: &SweepConfig,
    provider: &RegionProvider,
    name: &str,
    path: &Path,
    annotation: Option<&Annotation>,
    workdir: &Path,
) -> Result<Encoded, (PipelineError, Vec<String>)> {
    let image = codec::read_image(path).map_err(|e| (e.into(), vec![]))?;
    let (payload, _, log) =
        encode_transmitter(&image, name, provider, &cfg.geometry, cfg.resample, Some(workdir)).map_err(|e| (e, vec![]))?;
    let log = log.lines(&format!("[{name} provider]"));
    // What the receiver sees on a clean channel: the payload after a wire
    // round trip at the configured precision.
    let wire = codec::encode_payload_with(&payload, cfg.wire_precision).map_err(|e| (e.into(), log.clone()))?;
    let payload = codec::decode_payload(&wire).map_err(|e| (e.into(), log.clone()))?;
    Ok(Encoded { image, payload, truth: annotation.map(|a| a.bbox), log })
}

struct Cell {
    image_index: usize,
    snr_index: usize,
    method_index: usize,
    alpha_index: usize,
}

fn run_cell(
    cfg: &SweepConfig,
    enc: &Encoded,
    method: Method,
    snr_db: f64,
    alpha: f64,
    seed: u64,
    workdir: &Path,
) -> Result<(MetricReport, CallLog), PipelineError> {
    let received = channel_pass(&enc.payload, snr_db, &cfg.channel, seed)?;
    let r = build_reconstructor(cfg, method)?;
    let (recon, log) = reconstruct(&received, &r, alpha, cfg.resample, Some(workdir))?;
    if recon.dims() != enc.image.dims() {
        return Err(PipelineError::UnexpectedDims { expected: enc.image.dims(), actual: recon.dims() });
    }
    let m = score(&enc.image, &recon, &enc.payload, &received.answer_text, enc.truth.as_ref(), cfg)?;
    Ok((m, log))
}

fn default_work_dir(seed: u64) -> PathBuf {
    std::env::temp_dir().join(format!("uwsemsim-{}-{seed}", std::process::id()))
}

/// Loads `cfg.dataset_dir` and runs the sweep over it.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, PipelineError> {
    cfg.validate()?;
    let dataset = load_dataset(&cfg.dataset_dir)?;
    run_sweep_on(cfg, &dataset)
}

/// Runs the sweep over an already loaded dataset. Only configuration
/// problems are returned as errors; everything else lands in the rows.
pub fn run_sweep_on(cfg: &SweepConfig, dataset: &Dataset) -> Result<SweepReport, PipelineError> {
    cfg.validate()?;
    if dataset.images.is_empty() {
        return Err(PipelineError::Dataset("dataset has no images".into()));
    }
    let provider = build_provider(cfg, dataset)?;
    let work_dir = cfg.work_dir.clone().unwrap_or_else(|| default_work_dir(cfg.seed));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| PipelineError::Config(format!("thread pool: {e}")))?;

    let (encoded, cells) = pool.install(|| {
        let encoded: Vec<_> = dataset
            .images
            .par_iter()
            .enumerate()
            .map(|(i, img)| {
                let dir = work_dir.join(format!("image{i:05}"));
                encode_one(cfg, &provider, &img.name, &img.path, dataset.annotations.get(&img.name), &dir)
            })
            .collect();
        let mut grid = Vec::new();
        for image_index in 0..dataset.images.len() {
            for snr_index in 0..cfg.snr_grid.len() {
                for method_index in 0..cfg.methods.len() {
                    for alpha_index in 0..cfg.alpha_grid.len() {
                        grid.push(Cell { image_index, snr_index, method_index, alpha_index });
                    }
                }
            }
        }
        let cells: Vec<_> = grid
            .par_iter()
            .map(|c| {
                let name = &dataset.images[c.image_index].name;
                let (snr_db, method, alpha) =
                    (cfg.snr_grid[c.snr_index], cfg.methods[c.method_index], cfg.alpha_grid[c.alpha_index]);
                let seed = cell_seed(cfg.seed, c.image_index, c.snr_index, c.method_index);
                let tag = format!(
                    "[{name} snr={} method={method} alpha={alpha} seed={seed}]",
                    super::report::fmt_f64(snr_db)
                );
                let outcome = match &encoded[c.image_index] {
                    Ok(enc) => {
                        let dir = work_dir.join(format!(
                            "cell{:05}-{:03}-{:02}-{:03}",
                            c.image_index, c.snr_index, c.method_index, c.alpha_index
                        ));
                        run_cell(cfg, enc, method, snr_db, alpha, seed, &dir).map_err(|e| e.to_string())
                    }
                    Err((e, _)) => Err(format!("encode: {e}")),
                };
                let mut log = Vec::new();
                let (metrics, error) = match outcome {
                    Ok((m, call)) => {
                        log.extend(call.lines(&tag));
                        log.push(format!("{tag} ok ssim={} psnr_db={}", m.ssim, super::report::fmt_f64(m.psnr_db)));
                        (Some(m), None)
                    }
                    Err(e) => {
                        log.push(format!("{tag} error: {e}"));
                        (None, Some(e))
                    }
                };
                let row = SweepRow { image: name.clone(), snr_db, method, alpha, seed, metrics, error };
                (row, log)
            })
            .collect();
        (encoded, cells)
    });

    let mut log = Vec::new();
    for (img, enc) in dataset.images.iter().zip(&encoded) {
        match enc {
            Ok(e) => log.extend(e.log.iter().cloned()),
            Err((err, lines)) => {
                log.extend(lines.iter().cloned());
                log.push(format!("[{}] encode error: {err}", img.name));
            }
        }
    }
    let (rows, cell_logs): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
    log.extend(cell_logs.into_iter().flatten());

    let mut aggregates = Vec::new();
    for &snr_db in &cfg.snr_grid {
        for &method in &cfg.methods {
            for &alpha in &cfg.alpha_grid {
                let sel = rows.iter().filter(|r| {
                    r.snr_db.to_bits() == snr_db.to_bits() && r.method == method && r.alpha.to_bits() == alpha.to_bits()
                });
                aggregates.push(Aggregate::from_rows(snr_db, method, alpha, sel));
            }
        }
    }
    let operating_points = cfg
        .snr_grid
        .iter()
        .map(|&snr| OperatingPointEntry::new(snr, snr_to_range(&cfg.channel, snr).map_err(|e| e.to_string())))
        .collect();

    Ok(SweepReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed: cfg.seed,
        payload_format_version: codec::wire_version(cfg.wire_precision),
        tensor_format_version: codec::TENSOR_VERSION,
        wire_precision: cfg.wire_precision.name().to_string(),
        rows,
        aggregates,
        operating_points,
        log,
    })
}
