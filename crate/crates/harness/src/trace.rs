//! Trace files: a JSON header line followed by one input event per line.

use serde::{Deserialize, Serialize};
use touchchart_core::InputEvent;

use crate::error::TraceError;

pub const TRACE_FORMAT: &str = "touchchart-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceHeader {
    pub format: String,
    pub version: u32,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub header: TraceHeader,
    pub events: Vec<InputEvent>,
}

impl TraceFile {
    pub fn new(config_hash: impl Into<String>, events: Vec<InputEvent>) -> Self {
        Self {
            header: TraceHeader {
                format: TRACE_FORMAT.into(),
                version: TRACE_VERSION,
                config_hash: config_hash.into(),
            },
            events,
        }
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header_line = lines.next().ok_or(TraceError::MissingHeader)?;
        let header: TraceHeader =
            serde_json::from_str(header_line).map_err(|e| TraceError::BadHeader(e.to_string()))?;
        if header.format != TRACE_FORMAT {
            return Err(TraceError::BadHeader(format!("format {:?} is not {TRACE_FORMAT:?}", header.format)));
        }
        if header.version != TRACE_VERSION {
            return Err(TraceError::BadHeader(format!(
                "version {} is not supported (expected {TRACE_VERSION})",
                header.version
            )));
        }
        let mut events: Vec<InputEvent> = Vec::new();
        for (record, line) in lines.enumerate() {
            let event: InputEvent = serde_json::from_str(line).map_err(|e| TraceError::Malformed {
                record,
                message: e.to_string(),
            })?;
            if let Some(prev) = events.last() {
                if event.time < prev.time {
                    return Err(TraceError::TimeWentBackwards {
                        record,
                        time: event.time,
                        previous: prev.time,
                    });
                }
            }
            events.push(event);
        }
        Ok(Self { header, events })
    }

    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use touchchart_core::interaction::{Gesture, SwipeDirection};

    fn sample() -> TraceFile {
        TraceFile::new(
            "abc",
            vec![
                InputEvent::at(0, Gesture::TouchDown, 10.0, 20.5),
                InputEvent::new(40, Gesture::Swipe { direction: SwipeDirection::Left }),
                InputEvent::new(40, Gesture::DoubleTap),
            ],
        )
    }

    #[test]
    fn round_trips() {
        let t = sample();
        let text = t.to_text();
        assert_eq!(TraceFile::parse(&text).unwrap(), t);
        assert!(text.contains(r#"{"time":40,"kind":"swipe","direction":"left"}"#), "{text}");
    }

    #[test]
    fn decreasing_time_names_the_record() {
        let mut t = sample();
        t.events[2].time = 5;
        let err = TraceFile::parse(&t.to_text()).unwrap_err();
        assert_eq!(
            err,
            TraceError::TimeWentBackwards {
                record: 2,
                time: 5,
                previous: 40
            }
        );
    }

    #[test]
    fn malformed_record_is_indexed() {
        let text = format!("{}{}\n", sample().to_text(), r#"{"time":50,"kind":"wiggle"}"#);
        match TraceFile::parse(&text).unwrap_err() {
            TraceError::Malformed { record, .. } => assert_eq!(record, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_checks() {
        assert_eq!(TraceFile::parse("\n").unwrap_err(), TraceError::MissingHeader);
        let bad = r#"{"format":"touchchart-trace","version":2,"config_hash":"x"}"#;
        assert!(matches!(TraceFile::parse(bad), Err(TraceError::BadHeader(_))));
        let empty = r#"{"format":"touchchart-trace","version":1,"config_hash":"x"}"#;
        assert!(TraceFile::parse(empty).unwrap().events.is_empty());
    }
}
