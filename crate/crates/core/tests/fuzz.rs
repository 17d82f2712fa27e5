mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use touchchart_core::interaction::{Feedback, FeedbackEvent, Gesture, InputEvent, Mode};
use touchchart_core::{ChartKind, Engine};

fn engines(seed: u64) -> Vec<Engine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        common::engine(common::random_scatter(&mut rng, 120, 3)),
        common::engine(common::random_line(&mut rng, 60, 2)),
        common::engine(common::random_scatter(&mut rng, 1, 1)),
    ]
}

fn run(engine: &Engine, events: &[InputEvent]) -> Vec<Vec<FeedbackEvent>> {
    let (mut s, open) = engine.open();
    let mut out = vec![open];
    for e in events {
        let (next, fb) = engine.dispatch(&s, e);
        s = next;
        out.push(fb);
    }
    out
}

#[test]
fn random_events_keep_state_valid() {
    for (k, engine) in engines(3).iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let (mut s, _) = engine.open();
        let mut time = 0;
        for i in 0..20_000 {
            let e = common::random_event(&mut rng, &mut time);
            let mode = s.mode;
            let (next, fb) = engine.dispatch(&s, &e);
            if let Err(msg) = engine.check_state(&next) {
                panic!("event {i} {e:?}: {msg}");
            }
            if mode == Mode::Snf && matches!(e.gesture, Gesture::TouchDown | Gesture::TouchMove) {
                assert!(!fb.is_empty(), "silent touch at event {i}");
            }
            s = next;
        }
    }
}

#[test]
fn dispatch_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut time = 0;
    let events: Vec<InputEvent> = (0..3000).map(|_| common::random_event(&mut rng, &mut time)).collect();
    for engine in engines(4) {
        assert_eq!(run(&engine, &events), run(&engine, &events));
    }
}

#[test]
fn line_tones_respect_throttle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let engine = common::engine(common::random_line(&mut rng, 90, 1));
    assert_eq!(engine.model.kind(), ChartKind::Line);
    let (s, _) = engine.open();
    let (mut s, _) = engine.transition_mode(&s, 0);
    let min = engine.config.dtm.min_interval_ms;
    let mut time = 0u64;
    let mut last_tone: Option<u64> = None;
    for _ in 0..300 {
        let moves = rng.gen_range(1..30);
        let mut last_pos = None;
        for j in 0..=moves {
            time += rng.gen_range(0..60);
            let p = (rng.gen_range(0.0..390.0), rng.gen_range(0.0..844.0));
            let g = if j == 0 { Gesture::TouchDown } else { Gesture::TouchMove };
            let (next, fb) = engine.dispatch(&s, &InputEvent::at(time, g, p.0, p.1));
            s = next;
            for f in fb.iter().filter(|f| matches!(f.feedback, Feedback::Tone { .. })) {
                if let Some(l) = last_tone {
                    assert!(f.time >= l + min);
                }
                last_tone = Some(f.time);
            }
            last_pos = Some(p);
        }
        time += rng.gen_range(0..60);
        let (x, y) = last_pos.unwrap();
        let already = s.last_emitted_pos == Some(touchchart_core::ScreenPoint::new(x, y));
        let (next, fb) = engine.dispatch(&s, &InputEvent::at(time, Gesture::TouchUp, x, y));
        s = next;
        let tones: Vec<&FeedbackEvent> = fb.iter().filter(|f| matches!(f.feedback, Feedback::Tone { .. })).collect();
        for f in &tones {
            if let Some(l) = last_tone {
                assert!(f.time >= l + min);
            }
            last_tone = Some(f.time);
        }
        // the final position sounded on its own move or at release
        assert!(already || tones.len() == 1);
        assert!(!(already && !tones.is_empty()));
    }
}
