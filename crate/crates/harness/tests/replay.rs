use std::path::PathBuf;

use touchchart_core::interaction::{Feedback, Gesture};
use touchchart_core::InputEvent;
use touchchart_harness::replay::{replay_trace, run_events};
use touchchart_harness::{HarnessError, LoadedSession, TraceFile, Transcript};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load(config: &str, trace: &str) -> (LoadedSession, TraceFile) {
    let session = LoadedSession::load(&data(config)).unwrap();
    let trace = TraceFile::parse(&std::fs::read_to_string(data(trace)).unwrap()).unwrap();
    (session, trace)
}

#[test]
fn empty_trace_is_just_the_overview() {
    let (session, trace) = load("penguins.toml", "golden/empty.trace");
    let t = replay_trace(&session, &trace, false).unwrap();
    assert_eq!(t.records.len(), 1);
    assert_eq!(t.records[0].input, None);
    match &t.records[0].feedback[..] {
        [f] => assert!(matches!(&f.feedback, Feedback::Speech { text } if text.contains("scatter chart"))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn gentoo_bin_plays_tick_tick_tick_beep_beep_tick_tick() {
    let (session, trace) = load("penguins.toml", "golden/penguin_gentoo_bin.trace");
    let t = replay_trace(&session, &trace, false).unwrap();
    let sequences: Vec<Vec<bool>> = t
        .feedback()
        .filter_map(|f| match &f.feedback {
            Feedback::ToneSequence { tones } => Some(tones.iter().map(|x| x.is_numb()).collect()),
            _ => None,
        })
        .collect();
    let pattern = vec![true, true, true, false, false, true, true];
    assert!(sequences.contains(&pattern), "{sequences:?}");
    // the final touch lands back on the first bin
    assert_eq!(sequences.last().unwrap(), &pattern);
}

#[test]
fn replay_is_byte_identical() {
    let (session, trace) = load("covid.toml", "golden/covid_january.trace");
    let a = replay_trace(&session, &trace, false).unwrap().to_text();
    let b = replay_trace(&session, &trace, false).unwrap().to_text();
    assert_eq!(a, b);
    let again = Transcript::parse(&a).unwrap().to_text();
    assert_eq!(again, a);
}

#[test]
fn hash_mismatch_needs_force() {
    let (session, mut trace) = load("covid.toml", "golden/covid_january.trace");
    trace.header.config_hash = "0".repeat(64);
    assert!(matches!(
        replay_trace(&session, &trace, false),
        Err(HarnessError::HashMismatch { .. })
    ));
    let forced = replay_trace(&session, &trace, true).unwrap();
    assert_eq!(forced.header.config_hash, session.hash);
}

#[test]
fn one_record_per_event() {
    let (session, _) = load("penguins.toml", "golden/empty.trace");
    let events: Vec<InputEvent> = (0..25).map(|i| InputEvent::new(i * 10, Gesture::ZScrub)).collect();
    let trace = TraceFile::new(session.hash.clone(), events);
    let t = run_events(&session.engine, &session.hash, &trace);
    assert_eq!(t.records.len(), 26);
    for (i, r) in t.records.iter().skip(1).enumerate() {
        assert_eq!(r.input, Some(i));
    }
}
