use std::path::PathBuf;

use touchchart_core::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid config: {message}")]
    Config { path: PathBuf, message: String },
    #[error("unsupported {what} version {found} (expected {expected})")]
    UnsupportedVersion {
        what: &'static str,
        found: u32,
        expected: u32,
    },
    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trace was recorded for config {found}, current config is {expected}; use --force to replay anyway")]
    HashMismatch { expected: String, found: String },
}

/// Problems in a trace or transcript document. `record` counts events
/// from 0; the header is not a record.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("missing header line")]
    MissingHeader,
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("record {record}: {message}")]
    Malformed { record: usize, message: String },
    #[error("record {record}: time {time} is earlier than the previous record ({previous})")]
    TimeWentBackwards { record: usize, time: u64, previous: u64 },
}

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("frame of {0} bytes exceeds the limit")]
    FrameTooLarge(usize),
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("sequence number {got} is not after {last}")]
    StaleSequence { got: u64, last: u64 },
    #[error("event time {time} is earlier than the previous event ({previous})")]
    TimeWentBackwards { time: u64, previous: u64 },
}
