use touchchart_core::Engine;

use crate::config::LoadedSession;
use crate::error::HarnessError;
use crate::trace::TraceFile;
use crate::transcript::{Transcript, TranscriptRecord};

/// Runs every event through a fresh session.
pub fn run_events(engine: &Engine, config_hash: &str, trace: &TraceFile) -> Transcript {
    let (mut state, opening) = engine.open();
    let mut transcript = Transcript::new(config_hash);
    transcript.records.push(TranscriptRecord {
        input: None,
        feedback: opening,
    });
    for (i, event) in trace.events.iter().enumerate() {
        let (next, feedback) = engine.dispatch(&state, event);
        state = next;
        transcript.records.push(TranscriptRecord {
            input: Some(i),
            feedback,
        });
    }
    transcript
}

pub fn replay_trace(session: &LoadedSession, trace: &TraceFile, force: bool) -> Result<Transcript, HarnessError> {
    if trace.header.config_hash != session.hash {
        if !force {
            return Err(HarnessError::HashMismatch {
                expected: session.hash.clone(),
                found: trace.header.config_hash.clone(),
            });
        }
        log::warn!("config hash mismatch ignored");
    }
    Ok(run_events(&session.engine, &session.hash, trace))
}
