use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use uwsemsim::codec::{self, Dims, ImageTensor, SemanticPayload, WirePrecision};
use uwsemsim::metrics::{self, MetricReport};
use uwsemsim::pipeline::{
    self, build_provider, build_reconstructor, channel_pass, encode_transmitter, read_annotations, reconstruct,
    Annotation, Dataset, Method, SweepReport, ANNOTATIONS_FILE,
};
use uwsemsim::rng::RNG_ALGORITHM;
use uwsemsim::synth;

use crate::{suim, Command, CliError, RunConfig};

pub(crate) fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::ImportSuim(a) => {
            let s = cmd_import_suim(&a.src, &a.dst, a.resize)?;
            println!("imported {} images, skipped {}", s.imported, s.skipped.len());
        }
        Command::SynthDataset(a) => {
            cmd_synth(&a.dst, a.count, a.size, a.seed)?;
            println!("wrote {} scenes to {}", a.count, a.dst.display());
        }
        Command::Encode(a) => {
            let cfg = load_config(a.config.config.as_deref())?;
            let p = cmd_encode(&a.image, &cfg, a.config.config.is_some(), a.annotations.as_deref(), a.wire_precision, &a.out)?;
            println!("{} bytes of payload sections, key region {}, bbox {}", codec::payload_size_bytes(&p), p.key_region.dims(), p.key_bbox);
        }
        Command::Transmit(a) => {
            let cfg = load_config(a.config.config.as_deref())?;
            let seed = a.seed.unwrap_or(cfg.sweep.channel.seed);
            cmd_transmit(&a.payload, &cfg, a.snr, seed, a.wire_precision, &a.out)?;
        }
        Command::Decode(a) => {
            let cfg = load_config(a.config.config.as_deref())?;
            cmd_decode(&a.payload, &cfg, a.method, a.alpha, &a.out)?;
        }
        Command::Metrics(a) => {
            let cfg = load_config(a.config.config.as_deref())?;
            let m = cmd_metrics(
                &a.original,
                &a.reconstruction,
                &cfg,
                a.sent.as_deref(),
                a.received.as_deref(),
                a.annotations.as_deref(),
            )?;
            println!("{}", serde_json::to_string(&m).map_err(|e| CliError::Format(e.to_string()))?);
        }
        Command::Sweep(a) => {
            let mut cfg = RunConfig::load(&a.config)?;
            crate::apply_log_level(cfg.log_level);
            let s = &mut cfg.sweep;
            if let Some(v) = a.seed {
                s.seed = v;
            }
            if let Some(v) = a.snr {
                s.snr_grid = v;
            }
            if let Some(v) = a.alpha {
                s.alpha_grid = v;
            }
            if let Some(v) = a.method {
                s.methods = v;
            }
            if let Some(v) = a.jobs {
                s.jobs = v;
            }
            if let Some(v) = a.wire_precision {
                s.wire_precision = v;
            }
            if let Some(v) = a.out {
                cfg.output_dir = v;
            }
            cfg.sweep.validate()?;
            let out = cmd_sweep(&cfg)?;
            print_summary(&out.report);
            println!("wrote {}", out.dir.display());
        }
    }
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default_in_cwd(),
    };
    crate::apply_log_level(cfg.log_level);
    Ok(cfg)
}

fn work_dir(cfg: &RunConfig, stage: &str) -> PathBuf {
    let base = cfg.sweep.work_dir.clone().unwrap_or_else(|| std::env::temp_dir().join(format!("uwsemsim-{}", std::process::id())));
    base.join(stage)
}

fn read_payload(path: &Path) -> Result<SemanticPayload, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path.display(), e))?;
    Ok(codec::decode_payload(&bytes)?)
}

fn write_payload(path: &Path, p: &SemanticPayload, precision: WirePrecision) -> Result<(), CliError> {
    let bytes = codec::encode_payload_with(p, precision)?;
    fs::write(path, bytes).map_err(|e| CliError::io(path.display(), e))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn annotations_for(image: &Path, explicit: Option<&Path>) -> Result<BTreeMap<String, Annotation>, CliError> {
    let default = image.parent().unwrap_or(Path::new(".")).join(ANNOTATIONS_FILE);
    match explicit {
        Some(p) => Ok(read_annotations(p)?),
        None if default.is_file() => Ok(read_annotations(&default)?),
        None => Ok(BTreeMap::new()),
    }
}

pub fn cmd_import_suim(src: &Path, dst: &Path, resize: Option<(usize, usize)>) -> Result<suim::ImportSummary, CliError> {
    suim::import_suim(src, dst, resize)
}

pub fn cmd_synth(dst: &Path, count: usize, (width, height): (usize, usize), seed: u64) -> Result<(), CliError> {
    synth::write_dataset(dst, seed, count, Dims::new(3, height, width))?;
    Ok(())
}

/// Encodes one image. Without an explicit config the configured frame size
/// follows the image.
pub fn cmd_encode(
    image: &Path,
    cfg: &RunConfig,
    config_given: bool,
    annotations: Option<&Path>,
    precision: Option<WirePrecision>,
    out: &Path,
) -> Result<SemanticPayload, CliError> {
    let img = codec::read_image(image)?;
    let mut sweep = cfg.sweep.clone();
    if !config_given {
        sweep.geometry.original = img.dims();
    }
    let dataset = Dataset { images: vec![], annotations: annotations_for(image, annotations)? };
    let provider = build_provider(&sweep, &dataset)?;
    let id = file_name(image);
    let (payload, _, log) =
        encode_transmitter(&img, &id, &provider, &sweep.geometry, sweep.resample, Some(&work_dir(cfg, "provider")))?;
    for line in log.lines("[provider]") {
        log::info!("{line}");
    }
    let precision = precision.unwrap_or(sweep.wire_precision);
    write_payload(out, &payload, precision)?;
    // Hand back what a reader of `out` gets.
    Ok(codec::decode_payload(&codec::encode_payload_with(&payload, precision)?)?)
}

pub fn cmd_transmit(
    payload: &Path,
    cfg: &RunConfig,
    snr_db: f64,
    seed: u64,
    precision: Option<WirePrecision>,
    out: &Path,
) -> Result<SemanticPayload, CliError> {
    let p = read_payload(payload)?;
    let noisy = channel_pass(&p, snr_db, &cfg.sweep.channel, seed)?;
    write_payload(out, &noisy, precision.unwrap_or(cfg.sweep.wire_precision))?;
    Ok(noisy)
}

pub fn cmd_decode(payload: &Path, cfg: &RunConfig, method: Method, alpha: f64, out: &Path) -> Result<ImageTensor, CliError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Config(format!("alpha {alpha} is outside [0, 1]")));
    }
    let p = read_payload(payload)?;
    let r = build_reconstructor(&cfg.sweep, method)?;
    let (img, log) = reconstruct(&p, &r, alpha, cfg.sweep.resample, Some(&work_dir(cfg, "reconstructor")))?;
    for line in log.lines("[reconstructor]") {
        log::info!("{line}");
    }
    codec::write_image(out, &img)?;
    Ok(img)
}

pub fn cmd_metrics(
    original: &Path,
    recon: &Path,
    cfg: &RunConfig,
    sent: Option<&Path>,
    received: Option<&Path>,
    annotations: Option<&Path>,
) -> Result<MetricReport, CliError> {
    let x = codec::read_image(original)?;
    let y = codec::read_image(recon)?;
    let sent = sent.map(read_payload).transpose()?;
    let received = received.map(read_payload).transpose()?;
    let mse = metrics::mse(&x, &y)?;
    let truth = match annotations {
        Some(p) => read_annotations(p)?.get(&file_name(original)).map(|a| a.bbox),
        None => None,
    };
    let iou_loss = match (&sent, truth) {
        (Some(s), Some(t)) => Some(metrics::bbox_prioritization_loss(&[s.key_bbox], &[t])?),
        _ => None,
    };
    let char_error_rate = match (&sent, &received) {
        (Some(s), Some(r)) => Some(metrics::char_error_rate(&s.answer_text, &r.answer_text)?),
        _ => None,
    };
    Ok(MetricReport {
        ssim: metrics::ssim(&x, &y, &cfg.sweep.ssim)?,
        psnr_db: metrics::psnr_from_mse(mse, cfg.sweep.ssim.dynamic_range),
        mse,
        iou_loss,
        char_error_rate,
        payload_bytes: sent.as_ref().map_or(0, |s| codec::payload_size_bytes_with(s, cfg.sweep.wire_precision)),
    })
}

pub struct SweepOutputs {
    pub dir: PathBuf,
    pub report: SweepReport,
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(path.display(), e))
}

/// Runs the sweep and writes `report.csv`, `report.json`, `config.toml`
/// (the file as given), `effective_config.toml` and `run.log`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepOutputs, CliError> {
    let report = pipeline::run_sweep(&cfg.sweep)?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(dir.display(), e))?;
    let csv = report.to_csv().map_err(|e| CliError::Format(e.to_string()))?;
    write_file(&dir, "report.csv", &csv)?;
    write_file(&dir, "report.json", report.to_json().map_err(|e| CliError::Format(e.to_string()))?.as_bytes())?;
    write_file(&dir, "config.toml", cfg.source.as_bytes())?;
    write_file(&dir, "effective_config.toml", cfg.effective_toml()?.as_bytes())?;
    let mut log = vec![
        format!("rng: {RNG_ALGORITHM}"),
        format!("seed: {}", report.seed),
        format!("payload format: UWSC v{} ({})", report.payload_format_version, report.wire_precision),
        format!("tensor format: UWTN v{}", report.tensor_format_version),
        format!("cells: {} ({} errors)", report.rows.len(), report.error_count()),
    ];
    log.extend(report.log.iter().cloned());
    let mut text = log.join("\n");
    text.push('\n');
    write_file(&dir, "run.log", text.as_bytes())?;
    for row in report.rows.iter().filter(|r| r.error.is_some()) {
        log::warn!("{} snr={} {}: {}", row.image, row.snr_db, row.method, row.error.as_deref().unwrap_or_default());
    }
    Ok(SweepOutputs { dir, report })
}

fn print_summary(r: &SweepReport) {
    println!("{:>8} {:>14} {:>6} {:>6} {:>10} {:>10}", "snr_db", "method", "alpha", "cells", "ssim", "cer");
    for a in &r.aggregates {
        let mean = |s: Option<pipeline::Stat>| s.map_or("-".to_string(), |s| format!("{:.4}", s.mean));
        println!(
            "{:>8} {:>14} {:>6} {:>6} {:>10} {:>10}",
            pipeline::report::fmt_f64(a.snr_db),
            a.method.name(),
            a.alpha,
            a.cells,
            mean(a.ssim),
            mean(a.char_error_rate)
        );
    }
}
