//! Session endpoint: one engine session per TCP connection.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::Arc;
use std::thread;

use touchchart_core::{Engine, Session};

use crate::error::ProtocolError;
use crate::protocol::{chart_info, read_frame, view_of, write_message, ClientMessage, ServerMessage};

/// Accepts connections forever, each on its own thread.
pub fn serve(listener: TcpListener, engine: Arc<Engine>) -> std::io::Result<()> {
    log::info!("listening on {}", listener.local_addr()?);
    for stream in listener.incoming() {
        let stream = stream?;
        // one small frame per event; don't let Nagle hold replies back
        let _ = stream.set_nodelay(true);
        let engine = Arc::clone(&engine);
        let peer = stream.peer_addr().ok();
        thread::spawn(move || {
            log::info!("client {peer:?} connected");
            match handle_connection(stream, engine) {
                Ok(()) => log::info!("client {peer:?} closed"),
                Err(e) => log::warn!("client {peer:?}: {e}"),
            }
        });
    }
    Ok(())
}

/// Runs one session until the client disconnects or breaks the protocol.
/// Protocol violations are reported to the client before closing.
pub fn handle_connection<S: Read + Write>(mut stream: S, engine: Arc<Engine>) -> Result<(), ProtocolError> {
    let mut session = Session::new(Arc::clone(&engine));
    let mut view = view_of(&engine, session.state());
    write_message(
        &mut stream,
        &ServerMessage::Snapshot {
            chart: chart_info(&engine),
            view: view.clone(),
            feedback: session.opening().to_vec(),
        },
    )?;
    let mut last_seq: Option<u64> = None;
    let mut last_time: Option<u64> = None;
    loop {
        let frame = match read_frame(&mut stream) {
            Ok(Some(f)) => f,
            Ok(None) => return Ok(()),
            Err(e @ ProtocolError::FrameTooLarge(_)) => return fail(&mut stream, None, e),
            Err(e) => return Err(e),
        };
        let msg: ClientMessage = match serde_json::from_slice(&frame) {
            Ok(m) => m,
            Err(e) => return fail(&mut stream, None, ProtocolError::Malformed(e.to_string())),
        };
        if let Some(last) = last_seq {
            if msg.seq <= last {
                return fail(&mut stream, Some(msg.seq), ProtocolError::StaleSequence { got: msg.seq, last });
            }
        }
        if let Some(previous) = last_time {
            if msg.event.time < previous {
                let e = ProtocolError::TimeWentBackwards {
                    time: msg.event.time,
                    previous,
                };
                return fail(&mut stream, Some(msg.seq), e);
            }
        }
        last_seq = Some(msg.seq);
        last_time = Some(msg.event.time);
        let feedback = session.dispatch(&msg.event);
        let next_view = view_of(&engine, session.state());
        let changed = (next_view != view).then(|| next_view.clone());
        view = next_view;
        write_message(
            &mut stream,
            &ServerMessage::Batch {
                seq: msg.seq,
                feedback,
                view: changed,
            },
        )?;
    }
}

fn fail<S: Write>(stream: &mut S, seq: Option<u64>, err: ProtocolError) -> Result<(), ProtocolError> {
    let _ = write_message(
        stream,
        &ServerMessage::Error {
            seq,
            message: err.to_string(),
        },
    );
    Err(err)
}
