//! Run configuration: a TOML file holding every [`SweepConfig`] field at
//! the top level plus `output_dir` and `log_level`.
//!
//! ```toml
//! output_dir = "runs/default"
//! log_level = "info"
//! seed = 7
//! dataset_dir = "data/suim512"
//! snr_grid = [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0, inf]
//! alpha_grid = [0.5]
//! methods = ["upsample_only", "composite"]
//! wire_precision = "f64"
//! resample = "bilinear"
//! jobs = 4
//!
//! [channel]
//! spread_factor = 1.5
//!
//! [geometry]
//! original = { channels = 3, height = 512, width = 512 }
//! key_budget_height = 64
//! key_budget_width = 64
//!
//! [provider]
//! mode = "oracle"
//!
//! [reconstructor]
//! command = ["python3", "decoder.py"]
//! timeout_ms = 60000
//! ```
//!
//! Relative paths are resolved against the directory holding the file and
//! stored as absolute paths, so the effective config can be re-run from
//! anywhere.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use uwsemsim::pipeline::SweepConfig;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub log_level: Option<log::LevelFilter>,
    pub sweep: SweepConfig,
    /// The file exactly as read, echoed into output directories.
    pub source: String,
}

#[derive(Serialize)]
struct Effective<'a> {
    output_dir: &'a Path,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_level: Option<String>,
    #[serde(flatten)]
    sweep: &'a SweepConfig,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    let joined = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    std::path::absolute(&joined).unwrap_or(joined)
}

impl RunConfig {
    /// Parses and validates config text; `base` anchors relative paths.
    pub fn parse(source: &str, base: &Path) -> Result<RunConfig, CliError> {
        let mut table: toml::Table = source.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let output_dir = match table.remove("output_dir") {
            Some(toml::Value::String(s)) => PathBuf::from(s),
            Some(other) => return Err(CliError::Config(format!("output_dir must be a string, got {other}"))),
            None => PathBuf::from("out"),
        };
        let log_level = match table.remove("log_level") {
            Some(toml::Value::String(s)) => {
                Some(s.parse().map_err(|_| CliError::Config(format!("log_level `{s}` is not a log level")))?)
            }
            Some(other) => return Err(CliError::Config(format!("log_level must be a string, got {other}"))),
            None => None,
        };
        let mut sweep =
            SweepConfig::deserialize(toml::Value::Table(table)).map_err(|e| CliError::Config(e.to_string()))?;
        sweep.dataset_dir = resolve(base, &sweep.dataset_dir);
        sweep.work_dir = sweep.work_dir.as_deref().map(|w| resolve(base, w));
        sweep.validate()?;
        Ok(RunConfig { output_dir: resolve(base, &output_dir), log_level, sweep, source: source.to_string() })
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let source = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        RunConfig::parse(&source, &base)
    }

    /// Defaults, as if from an empty file in the current directory.
    pub fn default_in_cwd() -> RunConfig {
        RunConfig::parse("", Path::new("")).expect("defaults are valid")
    }

    /// The configuration actually run, after command-line overrides.
    pub fn effective_toml(&self) -> Result<String, CliError> {
        let e = Effective {
            output_dir: &self.output_dir,
            log_level: self.log_level.map(|l| l.to_string().to_lowercase()),
            sweep: &self.sweep,
        };
        toml::to_string(&e).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use uwsemsim::pipeline::Method;

    #[test]
    fn empty_file_gives_defaults() {
        let c = RunConfig::parse("", Path::new("/base")).unwrap();
        assert_eq!(c.sweep.snr_grid, vec![0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0]);
        assert_eq!(c.output_dir, PathBuf::from("/base/out"));
        assert!(RunConfig::parse("", Path::new("rel")).unwrap().output_dir.is_absolute());
        assert_eq!(c.sweep.dataset_dir, PathBuf::from("/base/dataset"));
    }

    #[test]
    fn fields_parse() {
        let c = RunConfig::parse(
            "seed = 5\nlog_level = \"debug\"\nsnr_grid = [0.0, inf]\nmethods = [\"composite\"]\n[geometry]\nkey_budget_height = 128\nkey_budget_width = 128\n",
            Path::new(""),
        )
        .unwrap();
        assert_eq!(c.sweep.seed, 5);
        assert_eq!(c.log_level, Some(log::LevelFilter::Debug));
        assert_eq!(c.sweep.snr_grid[1], f64::INFINITY);
        assert_eq!(c.sweep.methods, vec![Method::Composite]);
        assert_eq!(c.sweep.geometry.key_budget_height, 128);
    }

    #[test]
    fn pointed_errors() {
        let err = |s: &str| RunConfig::parse(s, Path::new("")).unwrap_err().to_string();
        assert!(err("alpha_grid = []").contains("alpha_grid"));
        assert!(err("snr_gird = [1.0]").contains("snr_gird"));
        assert!(err("seed = \"x\"").contains("seed") || err("seed = \"x\"").contains("integer"));
        assert!(err("log_level = \"loud\"").contains("loud"));
        assert!(err("[channel]\nbandwidth_khz = -1.0").contains("bandwidth"));
    }

    #[test]
    fn effective_config_round_trips() {
        let c = RunConfig::parse("seed = 9\nsnr_grid = [3.0, inf]\n[reconstructor]\ncommand = [\"x\"]\n", Path::new("/b")).unwrap();
        let text = c.effective_toml().unwrap();
        let back = RunConfig::parse(&text, Path::new("/elsewhere")).unwrap();
        assert_eq!(back.sweep, c.sweep);
        assert_eq!(back.output_dir, c.output_dir);
    }
}
