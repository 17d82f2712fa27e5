//! Transcripts: canonical line-per-record feedback logs.

use serde::{Deserialize, Serialize};
use touchchart_core::FeedbackEvent;

use crate::error::TraceError;

pub const TRANSCRIPT_FORMAT: &str = "touchchart-transcript";
pub const TRANSCRIPT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptHeader {
    pub format: String,
    pub version: u32,
    pub config_hash: String,
}

/// Feedback for one input record; `input` is `None` for the session-open
/// narration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptRecord {
    pub input: Option<usize>,
    pub feedback: Vec<FeedbackEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub records: Vec<TranscriptRecord>,
}

impl Transcript {
    pub fn new(config_hash: impl Into<String>) -> Self {
        Self {
            header: TranscriptHeader {
                format: TRANSCRIPT_FORMAT.into(),
                version: TRANSCRIPT_VERSION,
                config_hash: config_hash.into(),
            },
            records: Vec::new(),
        }
    }

    /// All feedback in order, without record boundaries.
    pub fn feedback(&self) -> impl Iterator<Item = &FeedbackEvent> {
        self.records.iter().flat_map(|r| r.feedback.iter())
    }

    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header_line = lines.next().ok_or(TraceError::MissingHeader)?;
        let header: TranscriptHeader =
            serde_json::from_str(header_line).map_err(|e| TraceError::BadHeader(e.to_string()))?;
        if header.format != TRANSCRIPT_FORMAT || header.version != TRANSCRIPT_VERSION {
            return Err(TraceError::BadHeader(format!(
                "expected {TRANSCRIPT_FORMAT} version {TRANSCRIPT_VERSION}"
            )));
        }
        let records = lines
            .enumerate()
            .map(|(record, line)| {
                serde_json::from_str(line).map_err(|e| TraceError::Malformed {
                    record,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { header, records })
    }
}
