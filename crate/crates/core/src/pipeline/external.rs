//! File-based contract for out-of-process providers and reconstructors.
//!
//! The command runs with the work directory as its current directory.
//!
//! Provider: reads `input.uwtn` and `query.txt`, writes `bbox.json`
//! (`{"x","y","w","h"}` integers) and `caption.txt`.
//!
//! Reconstructor: reads `payload.bin` (a `UWSC` container) and `alpha.txt`,
//! writes `recon.uwtn` at the original dims.
//!
//! Exit status 0 is required. Stdout and stderr go to `stdout.log` and
//! `stderr.log` in the work directory and are returned to the caller.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Region;
use crate::codec::{self, BBox, Dims, ImageTensor, SemanticPayload};

pub const PROVIDER_INPUT: &str = "input.uwtn";
pub const PROVIDER_QUERY: &str = "query.txt";
pub const PROVIDER_BBOX: &str = "bbox.json";
pub const PROVIDER_CAPTION: &str = "caption.txt";
pub const RECON_PAYLOAD: &str = "payload.bin";
pub const RECON_ALPHA: &str = "alpha.txt";
pub const RECON_OUTPUT: &str = "recon.uwtn";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalCommand {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
}

fn default_timeout_ms() -> u64 {
    60_000
}

impl ExternalCommand {
    pub fn new<S: Into<String>>(command: impl IntoIterator<Item = S>, timeout_ms: u64) -> Self {
        ExternalCommand { command: command.into_iter().map(Into::into).collect(), timeout_ms }
    }

    pub fn validate(&self) -> Result<(), ExternalError> {
        if self.command.is_empty() || self.command[0].is_empty() {
            return Err(ExternalError::EmptyCommand);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("external command line is empty")]
    EmptyCommand,
    #[error("could not start `{program}`: {source}")]
    Spawn { program: String, source: io::Error },
    #[error("external process exited with {status}; stderr: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("external process exceeded its {timeout_ms} ms deadline and was killed")]
    Timeout { timeout_ms: u64 },
    #[error("external process did not write `{0}`")]
    MissingOutput(&'static str),
    #[error("malformed `{file}`: {reason}")]
    Malformed { file: &'static str, reason: String },
    #[error("bbox out of bounds: {bbox} in a {width}x{height} frame")]
    BBoxOutOfBounds { bbox: BBox, width: usize, height: usize },
    #[error("reconstruction is {actual}, expected {expected}")]
    WrongDims { expected: Dims, actual: Dims },
    #[error("work directory {path}: {source}")]
    WorkDir { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExternalRole {
    Provider,
    Reconstructor,
}

pub enum ExternalRequest<'a> {
    Provider { image: &'a ImageTensor, query: &'a str },
    Reconstructor { payload: &'a SemanticPayload, alpha: f64 },
}

impl ExternalRequest<'_> {
    pub fn role(&self) -> ExternalRole {
        match self {
            ExternalRequest::Provider { .. } => ExternalRole::Provider,
            ExternalRequest::Reconstructor { .. } => ExternalRole::Reconstructor,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExternalResponse {
    Region(Region),
    Image(ImageTensor),
}

/// Captured process output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CallLog {
    pub stdout: String,
    pub stderr: String,
}

impl CallLog {
    pub fn lines(&self, prefix: &str) -> Vec<String> {
        let tag = |stream: &str, text: &str| {
            text.lines().map(|l| format!("{prefix} [{stream}] {l}")).collect::<Vec<_>>()
        };
        let mut out = tag("stdout", &self.stdout);
        out.extend(tag("stderr", &self.stderr));
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BBoxJson {
    x: u32,
    y: u32,
    w: u32,
    h: u32,
}

fn workdir_err(path: &Path) -> impl FnOnce(io::Error) -> ExternalError + '_ {
    move |source| ExternalError::WorkDir { path: path.to_path_buf(), source }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), ExternalError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(workdir_err(&path))
}

/// Runs one external call in `workdir`: stages inputs, runs the command
/// under its deadline, and parses the role's outputs.
pub fn external_codec_call(
    request: &ExternalRequest<'_>,
    command: &ExternalCommand,
    workdir: &Path,
) -> Result<(ExternalResponse, CallLog), ExternalError> {
    command.validate()?;
    fs::create_dir_all(workdir).map_err(workdir_err(workdir))?;
    let outputs: &[&str] = match request.role() {
        ExternalRole::Provider => &[PROVIDER_BBOX, PROVIDER_CAPTION],
        ExternalRole::Reconstructor => &[RECON_OUTPUT],
    };
    for name in outputs {
        let path = workdir.join(name);
        if path.exists() {
            fs::remove_file(&path).map_err(workdir_err(&path))?;
        }
    }
    match request {
        ExternalRequest::Provider { image, query } => {
            write_file(workdir, PROVIDER_INPUT, &codec::encode_tensor(image))?;
            write_file(workdir, PROVIDER_QUERY, query.as_bytes())?;
        }
        ExternalRequest::Reconstructor { payload, alpha } => {
            let bytes = codec::encode_payload(payload)
                .map_err(|e| ExternalError::Malformed { file: RECON_PAYLOAD, reason: e.to_string() })?;
            write_file(workdir, RECON_PAYLOAD, &bytes)?;
            write_file(workdir, RECON_ALPHA, format!("{alpha}\n").as_bytes())?;
        }
    }

    let log = run_with_deadline(command, workdir)?;

    let response = match request {
        ExternalRequest::Provider { image, .. } => {
            let raw = read_output(workdir, PROVIDER_BBOX)?;
            let b: BBoxJson = serde_json::from_slice(&raw)
                .map_err(|e| ExternalError::Malformed { file: PROVIDER_BBOX, reason: e.to_string() })?;
            let bbox = BBox::new(b.x, b.y, b.w, b.h);
            if bbox.validate_within(image.width(), image.height()).is_err() {
                return Err(ExternalError::BBoxOutOfBounds { bbox, width: image.width(), height: image.height() });
            }
            let caption = String::from_utf8(read_output(workdir, PROVIDER_CAPTION)?)
                .map_err(|e| ExternalError::Malformed { file: PROVIDER_CAPTION, reason: e.to_string() })?;
            ExternalResponse::Region(Region { bbox, caption: caption.trim_end_matches(['\n', '\r']).to_string() })
        }
        ExternalRequest::Reconstructor { payload, .. } => {
            let raw = read_output(workdir, RECON_OUTPUT)?;
            let image = codec::decode_tensor(&raw)
                .map_err(|e| ExternalError::Malformed { file: RECON_OUTPUT, reason: e.to_string() })?;
            if image.dims() != payload.original_dims {
                return Err(ExternalError::WrongDims { expected: payload.original_dims, actual: image.dims() });
            }
            ExternalResponse::Image(image)
        }
    };
    Ok((response, log))
}

fn read_output(dir: &Path, name: &'static str) -> Result<Vec<u8>, ExternalError> {
    fs::read(dir.join(name)).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ExternalError::MissingOutput(name),
        _ => ExternalError::Malformed { file: name, reason: e.to_string() },
    })
}

fn run_with_deadline(command: &ExternalCommand, workdir: &Path) -> Result<CallLog, ExternalError> {
    let stdout_path = workdir.join("stdout.log");
    let stderr_path = workdir.join("stderr.log");
    let stdout = fs::File::create(&stdout_path).map_err(workdir_err(&stdout_path))?;
    let stderr = fs::File::create(&stderr_path).map_err(workdir_err(&stderr_path))?;
    let program = &command.command[0];
    let mut child = Command::new(program)
        .args(&command.command[1..])
        .current_dir(workdir)
        .stdin(Stdio::null())
        .stdout(stdout)
        .stderr(stderr)
        .spawn()
        .map_err(|source| ExternalError::Spawn { program: program.clone(), source })?;

    let deadline = Instant::now() + Duration::from_millis(command.timeout_ms);
    let status = loop {
        match child.try_wait().map_err(workdir_err(workdir))? {
            Some(status) => break status,
            None if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(ExternalError::Timeout { timeout_ms: command.timeout_ms });
            }
            None => std::thread::sleep(Duration::from_millis(5)),
        }
    };
    let log = CallLog {
        stdout: String::from_utf8_lossy(&fs::read(&stdout_path).unwrap_or_default()).into_owned(),
        stderr: String::from_utf8_lossy(&fs::read(&stderr_path).unwrap_or_default()).into_owned(),
    };
    if !status.success() {
        return Err(ExternalError::Failed { status: status.to_string(), stderr: log.stderr.trim().to_string() });
    }
    Ok(log)
}
