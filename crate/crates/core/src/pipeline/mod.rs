//! End-to-end orchestration: transmitter encode, channel impairment,
//! receiver reconstruction, scoring and SNR / alpha sweeps.

mod config;
mod dataset;
mod error;
pub mod external;
mod provider;
mod receiver;
pub mod report;
mod stage;
mod sweep;
mod transmitter;

pub use config::{Geometry, KeyScaling, Method, ProviderConfig, ProviderMode, SweepConfig};
pub use dataset::{load_dataset, read_annotations, write_annotations, Dataset, DatasetImage, ANNOTATIONS_FILE};
pub use error::PipelineError;
pub use external::{external_codec_call, CallLog, ExternalCommand, ExternalError, ExternalRequest, ExternalResponse};
pub use provider::{center_box, Annotation, Region, RegionProvider};
pub use receiver::{composite, reconstruct, upsample_only, Reconstructor};
pub use report::{Aggregate, Stat, SweepReport, SweepRow, CSV_HEADER};
pub use stage::channel_pass;
pub use sweep::{build_provider, build_reconstructor, cell_seed, run_sweep, run_sweep_on, score};
pub use transmitter::{assemble_payload, encode_transmitter, key_region_size};
