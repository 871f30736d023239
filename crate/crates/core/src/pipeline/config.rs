use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExternalCommand, PipelineError};
use crate::channel::ChannelParams;
use crate::codec::{Dims, WirePrecision};
use crate::imaging::ResamplePolicy;
use crate::metrics::SsimParams;

/// How the key-region crop is sized for transmission.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyScaling {
    /// Shrink the crop to fit the key budget, aspect preserved, never upscaled.
    FitBudget,
    /// Scale the crop by the budget-to-frame ratio, so the key region takes
    /// the same area fraction of the budget as the box takes of the frame.
    #[default]
    FrameRelative,
}

/// Tensor sizes on the transmitter side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    pub original: Dims,
    pub hc_height: usize,
    pub hc_width: usize,
    pub key_budget_height: usize,
    pub key_budget_width: usize,
    pub key_scaling: KeyScaling,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            original: Dims::new(3, 512, 512),
            hc_height: 32,
            hc_width: 32,
            key_budget_height: 64,
            key_budget_width: 64,
            key_scaling: KeyScaling::FrameRelative,
        }
    }
}

impl Geometry {
    pub fn hc_dims(&self) -> Dims {
        Dims::new(self.original.channels, self.hc_height, self.hc_width)
    }

    pub fn key_budget(&self) -> Dims {
        Dims::new(self.original.channels, self.key_budget_height, self.key_budget_width)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.original.validate().map_err(|e| PipelineError::Config(format!("geometry.original: {e}")))?;
        if self.hc_height == 0 || self.hc_width == 0 {
            return Err(PipelineError::Config("geometry: compressed image dims must be positive".into()));
        }
        if self.key_budget_height == 0 || self.key_budget_width == 0 {
            return Err(PipelineError::Config("geometry: key budget dims must be positive".into()));
        }
        Ok(())
    }
}

/// Receiver-side reconstruction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Upsample the compressed frame only.
    UpsampleOnly,
    /// Upsample, then fuse the key region back in at its box.
    Composite,
    /// Delegate to an external reconstructor process.
    External,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::UpsampleOnly => "upsample_only",
            Method::Composite => "composite",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "upsample_only" => Ok(Method::UpsampleOnly),
            "composite" => Ok(Method::Composite),
            "external" => Ok(Method::External),
            _ => Err(format!("unknown method `{s}` (expected upsample_only, composite or external)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderMode {
    /// Box and caption from the dataset annotations.
    #[default]
    Oracle,
    /// Centered box over a fixed share of the frame.
    CenterFallback,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProviderConfig {
    pub mode: ProviderMode,
    /// Question handed to an external provider as `query.txt`.
    pub query: String,
    /// Caption used by the center fallback when no annotation exists.
    pub fallback_caption: String,
    /// Area share of the frame covered by the center fallback box.
    pub fallback_area_fraction: f64,
    pub external: Option<ExternalCommand>,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig {
            mode: ProviderMode::Oracle,
            query: "What is the most important object in this image?".into(),
            fallback_caption: "an underwater scene".into(),
            fallback_area_fraction: 0.28,
            external: None,
        }
    }
}

/// Everything that determines a sweep's results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub snr_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub methods: Vec<Method>,
    pub dataset_dir: PathBuf,
    pub wire_precision: WirePrecision,
    pub resample: ResamplePolicy,
    pub jobs: usize,
    /// Scratch space for external-process calls; defaults to a directory
    /// under the system temp dir.
    pub work_dir: Option<PathBuf>,
    pub channel: ChannelParams,
    pub geometry: Geometry,
    pub provider: ProviderConfig,
    pub reconstructor: Option<ExternalCommand>,
    pub ssim: SsimParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            snr_grid: vec![0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0],
            alpha_grid: vec![0.5],
            methods: vec![Method::UpsampleOnly, Method::Composite],
            dataset_dir: PathBuf::from("dataset"),
            wire_precision: WirePrecision::F64,
            resample: ResamplePolicy::Bilinear,
            jobs: 1,
            work_dir: None,
            channel: ChannelParams::default(),
            geometry: Geometry::default(),
            provider: ProviderConfig::default(),
            reconstructor: None,
            ssim: SsimParams::default(),
        }
    }
}

impl SweepConfig {
    /// Checks everything that can be checked without touching the dataset.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let cfg = |m: String| Err(PipelineError::Config(m));
        if self.snr_grid.is_empty() {
            return cfg("snr_grid must list at least one SNR".into());
        }
        if let Some(v) = self.snr_grid.iter().find(|v| v.is_nan() || **v == f64::NEG_INFINITY) {
            return cfg(format!("snr_grid entry {v} is not a usable SNR"));
        }
        if self.alpha_grid.is_empty() {
            return cfg("alpha_grid must list at least one alpha in [0, 1]".into());
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return cfg(format!("alpha_grid entry {a} is outside [0, 1]"));
        }
        if self.methods.is_empty() {
            return cfg("methods must list at least one reconstruction method".into());
        }
        if self.methods.contains(&Method::External) && self.reconstructor.is_none() {
            return cfg("method `external` needs a [reconstructor] command".into());
        }
        if self.provider.mode == ProviderMode::External && self.provider.external.is_none() {
            return cfg("provider mode `external` needs a [provider.external] command".into());
        }
        if !(self.provider.fallback_area_fraction > 0.0 && self.provider.fallback_area_fraction <= 1.0) {
            return cfg("provider.fallback_area_fraction must lie in (0, 1]".into());
        }
        for c in self.provider.external.iter().chain(&self.reconstructor) {
            c.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        }
        self.channel.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        self.ssim.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        self.geometry.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SweepConfig::default().validate().unwrap();
    }

    #[test]
    fn grid_checks() {
        let base = SweepConfig::default();
        let bad = [
            SweepConfig { snr_grid: vec![], ..base.clone() },
            SweepConfig { snr_grid: vec![f64::NAN], ..base.clone() },
            SweepConfig { alpha_grid: vec![], ..base.clone() },
            SweepConfig { alpha_grid: vec![1.2], ..base.clone() },
            SweepConfig { methods: vec![], ..base.clone() },
            SweepConfig { methods: vec![Method::External], ..base.clone() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(PipelineError::Config(_))));
        }
        SweepConfig { snr_grid: vec![f64::INFINITY], ..base }.validate().unwrap();
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::UpsampleOnly, Method::Composite, Method::External] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("upsample-only".parse::<Method>().unwrap(), Method::UpsampleOnly);
        assert!("diffusion".parse::<Method>().is_err());
    }
}
