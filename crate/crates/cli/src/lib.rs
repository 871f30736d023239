//! `uwsemsim` command line: dataset import, single-shot pipeline stages,
//! metrics and sweeps.
//!
//! Exit codes: 0 success, 2 configuration, 3 I/O, 4 format, 5 external codec.

mod commands;
mod config;
mod error;
pub mod suim;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use uwsemsim::codec::WirePrecision;
use uwsemsim::pipeline::Method;

pub use commands::{cmd_decode, cmd_encode, cmd_import_suim, cmd_metrics, cmd_sweep, cmd_synth, cmd_transmit, SweepOutputs};
pub use config::RunConfig;
pub use error::CliError;

/// Environment variable holding the log filter, e.g. `debug` or `uwsemsim=trace`.
pub const LOG_ENV: &str = "UWSEMSIM_LOG";

#[derive(Debug, Parser)]
#[command(name = "uwsemsim", version, about = "Semantic image transmission over a simulated underwater acoustic link")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert SUIM images and color masks into a dataset directory.
    ImportSuim(ImportArgs),
    /// Write a synthetic dataset of annotated scenes.
    SynthDataset(SynthArgs),
    /// Encode one image into a payload file.
    Encode(EncodeArgs),
    /// Pass a payload file through the acoustic channel.
    Transmit(TransmitArgs),
    /// Reconstruct an image from a payload file.
    Decode(DecodeArgs),
    /// Score a reconstruction against its original; prints one JSON row.
    Metrics(MetricsArgs),
    /// Run an SNR / alpha sweep over a dataset.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Run configuration (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    pub src: PathBuf,
    pub dst: PathBuf,
    /// Resize every image (and its box) to WIDTHxHEIGHT.
    #[arg(long, value_parser = parse_size)]
    pub resize: Option<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub dst: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Frame size as WIDTHxHEIGHT.
    #[arg(long, value_parser = parse_size, default_value = "512x512")]
    pub size: (usize, usize),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub image: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
    /// Annotation file; defaults to `annotations.json` next to the image.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    #[arg(long)]
    pub wire_precision: Option<WirePrecision>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransmitArgs {
    pub payload: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
    /// Target SNR in dB; `inf` for a clean channel.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: f64,
    /// Channel seed; defaults to `channel.seed` from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub wire_precision: Option<WirePrecision>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    pub payload: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long, default_value = "composite")]
    pub method: Method,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Output image; `.ppm` writes 8-bit PPM, anything else UWTN.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    pub original: PathBuf,
    pub reconstruction: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
    /// Payload as sent; gives `payload_bytes`, and `char_error_rate` with `--received`.
    #[arg(long)]
    pub sent: Option<PathBuf>,
    /// Payload as received.
    #[arg(long)]
    pub received: Option<PathBuf>,
    /// Annotations for `iou_loss`, looked up by the original's file name.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replaces the SNR grid (comma-separated dB values, `inf` allowed).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr: Option<Vec<f64>>,
    /// Replaces the alpha grid.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Replaces the method list.
    #[arg(long, value_delimiter = ',')]
    pub method: Option<Vec<Method>>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub wire_precision: Option<WirePrecision>,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("`{s}` is not WIDTHxHEIGHT"))?;
    let p = |v: &str| v.trim().parse::<usize>().ok().filter(|n| *n > 0).ok_or_else(|| format!("bad size `{s}`"));
    Ok((p(w)?, p(h)?))
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "trace");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
    if std::env::var_os(LOG_ENV).is_none() {
        log::set_max_level(log::LevelFilter::Warn);
    }
}

/// Applies a config's `log_level` unless the environment already chose one.
pub(crate) fn apply_log_level(level: Option<log::LevelFilter>) {
    if let (Some(level), None) = (level, std::env::var_os(LOG_ENV)) {
        log::set_max_level(level);
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging();
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
