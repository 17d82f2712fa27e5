use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::Arc;
use std::thread;

use rand::SeedableRng;
use touchchart_core::interaction::{Feedback, Gesture, HoldMove};
use touchchart_core::{Engine, FeedbackEvent, InputEvent};
use touchchart_harness::protocol::{read_frame, write_frame, write_message, ClientMessage, ServerMessage};
use touchchart_harness::replay::run_events;
use touchchart_harness::server::serve;
use touchchart_harness::{LoadedSession, TraceFile};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn start(config: &str) -> (std::net::SocketAddr, Arc<Engine>, String) {
    let session = LoadedSession::load(&data(config)).unwrap();
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let engine = Arc::clone(&session.engine);
    thread::spawn(move || serve(listener, engine));
    (addr, session.engine, session.hash)
}

struct Client {
    stream: TcpStream,
}

impl Client {
    fn connect(addr: std::net::SocketAddr) -> (Self, ServerMessage) {
        let mut stream = TcpStream::connect(addr).unwrap();
        stream.set_nodelay(true).unwrap();
        let snap = Self::read(&mut stream).unwrap();
        (Self { stream }, snap)
    }

    fn read(stream: &mut TcpStream) -> Option<ServerMessage> {
        read_frame(stream).unwrap().map(|f| serde_json::from_slice(&f).unwrap())
    }

    fn send(&mut self, seq: u64, event: InputEvent) -> ServerMessage {
        write_message(&mut self.stream, &ClientMessage { seq, event }).unwrap();
        Self::read(&mut self.stream).unwrap()
    }

    fn batch(&mut self, seq: u64, event: InputEvent) -> Vec<FeedbackEvent> {
        match self.send(seq, event) {
            ServerMessage::Batch { seq: got, feedback, .. } => {
                assert_eq!(got, seq);
                feedback
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn snapshot_describes_chart_and_regions() {
    let (addr, engine, _) = start("penguins.toml");
    let (_c, snap) = Client::connect(addr);
    match snap {
        ServerMessage::Snapshot { chart, view, feedback } => {
            assert_eq!(chart.series_names, ["Adelie", "Chinstrap", "Gentoo"]);
            assert_eq!(view.points.len(), engine.model.points.len());
            assert_eq!(view.regions.len(), 1);
            assert!(view.regions[0].focused);
            assert_eq!(feedback.len(), 1);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn touch_in_bottom_left_quadrant_says_x_axis_area() {
    let (addr, _, _) = start("penguins.toml");
    let (mut c, _) = Client::connect(addr);
    // into the zone level, then onto another zone and back by touch
    c.batch(1, InputEvent::new(10, Gesture::DoubleTap));
    c.batch(2, InputEvent::at(20, Gesture::TouchDown, 300.0, 100.0));
    let fb = c.batch(3, InputEvent::at(30, Gesture::TouchDown, 50.0, 800.0));
    assert_eq!(
        fb[0].feedback,
        Feedback::Speech {
            text: "X axis area".into()
        }
    );
}

#[test]
fn stale_sequence_gets_error_frame_and_close() {
    let (addr, _, _) = start("penguins.toml");
    let (mut c, _) = Client::connect(addr);
    c.batch(5, InputEvent::new(10, Gesture::ZScrub));
    match c.send(5, InputEvent::new(20, Gesture::ZScrub)) {
        ServerMessage::Error { seq, message } => {
            assert_eq!(seq, Some(5));
            assert!(message.contains("sequence"));
        }
        other => panic!("{other:?}"),
    }
    assert!(Client::read(&mut c.stream).is_none());
}

#[test]
fn malformed_frame_gets_error_frame_and_close() {
    let (addr, _, _) = start("penguins.toml");
    let (mut c, _) = Client::connect(addr);
    write_frame(&mut c.stream, b"{\"seq\":1,\"event\":{\"kind\":\"teleport\"}}").unwrap();
    assert!(matches!(
        Client::read(&mut c.stream).unwrap(),
        ServerMessage::Error { seq: None, .. }
    ));
    assert!(Client::read(&mut c.stream).is_none());
}

#[test]
fn rapid_moves_are_throttled_over_the_wire() {
    let (addr, engine, _) = start("covid.toml");
    let (mut c, _) = Client::connect(addr);
    c.batch(
        1,
        InputEvent::new(0, Gesture::DoubleTapHoldMove { direction: HoldMove::Hold }),
    );
    let min = engine.config.dtm.min_interval_ms;
    let first = c.batch(2, InputEvent::at(1000, Gesture::TouchMove, 100.0, 400.0));
    assert!(matches!(first[0].feedback, Feedback::Tone { .. }));
    let second = c.batch(3, InputEvent::at(1000 + min - 1, Gesture::TouchMove, 140.0, 400.0));
    assert!(second.is_empty());
}

#[test]
fn serve_and_replay_agree() {
    let (addr, engine, hash) = start("penguins.toml");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let events = common::random_events(&mut rng, 400);
    let transcript = run_events(&engine, &hash, &TraceFile::new(hash.clone(), events.clone()));
    let (mut c, snap) = Client::connect(addr);
    let ServerMessage::Snapshot { feedback, .. } = snap else {
        panic!()
    };
    assert_eq!(feedback, transcript.records[0].feedback);
    for (i, e) in events.into_iter().enumerate() {
        let fb = c.batch(i as u64 + 1, e);
        assert_eq!(fb, transcript.records[i + 1].feedback, "event {i}");
    }
}

#[test]
fn sessions_are_independent() {
    let (addr, _, _) = start("penguins.toml");
    let (mut a, _) = Client::connect(addr);
    let (mut b, _) = Client::connect(addr);
    let fa = a.batch(1, InputEvent::new(10, Gesture::DoubleTap));
    let fb = b.batch(1, InputEvent::new(10, Gesture::ZScrub));
    assert!(matches!(&fa[0].feedback, Feedback::Speech { text } if text == "X axis area"));
    assert!(matches!(fb[0].feedback, Feedback::Earcon { .. }));
}

mod common;
