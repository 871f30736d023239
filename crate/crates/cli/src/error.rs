use thiserror::Error;
use uwsemsim::channel::ChannelError;
use uwsemsim::codec::CodecError;
use uwsemsim::imaging::ImagingError;
use uwsemsim::metrics::MetricsError;
use uwsemsim::pipeline::{ExternalError, PipelineError};

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
    #[error("external codec: {0}")]
    External(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Format(_) => 4,
            CliError::External(_) => 5,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ImagingError> for CliError {
    fn from(e: ImagingError) -> Self {
        match e {
            ImagingError::AlphaOutOfRange(_) => CliError::Config(e.to_string()),
            ImagingError::Geometry(c) => c.into(),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ChannelError> for CliError {
    fn from(e: ChannelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<ExternalError> for CliError {
    fn from(e: ExternalError) -> Self {
        CliError::External(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(_) | PipelineError::Dataset(_) => CliError::Config(e.to_string()),
            PipelineError::MissingAnnotation(_)
            | PipelineError::UnexpectedDims { .. }
            | PipelineError::NoCompression { .. } => CliError::Format(e.to_string()),
            PipelineError::Codec(c) => c.into(),
            PipelineError::Imaging(i) => i.into(),
            PipelineError::Channel(c) => c.into(),
            PipelineError::Metrics(m) => m.into(),
            PipelineError::External(x) => x.into(),
            PipelineError::Io(io) => io.into(),
        }
    }
}
