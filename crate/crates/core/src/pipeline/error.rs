use thiserror::Error;

use crate::channel::ChannelError;
use crate::codec::CodecError;
use crate::imaging::ImagingError;
use crate::metrics::MetricsError;

use super::ExternalError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("no annotation for image `{0}`")]
    MissingAnnotation(String),
    #[error("image is {actual}, configured original dims are {expected}")]
    UnexpectedDims { expected: crate::codec::Dims, actual: crate::codec::Dims },
    #[error("payload of {payload} bytes does not compress the {raw}-byte original")]
    NoCompression { payload: u64, raw: u64 },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    External(#[from] ExternalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
