//! Wire format for live clients: each frame is a 4-byte big-endian length
//! followed by that many bytes of UTF-8 JSON.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use touchchart_core::geometry::data_to_screen;
use touchchart_core::narration::{describe_node, NavContext, RepeatCache};
use touchchart_core::tree::{layout_page, page_count};
use touchchart_core::{
    ChartKind, DataPos, Engine, FeedbackEvent, InputEvent, InteractionState, Mode, NodeId, Rect, ScreenSize,
    Viewport,
};

use crate::error::ProtocolError;

pub const MAX_FRAME: usize = 1 << 20;

/// Reads one frame. `Ok(None)` means the peer closed cleanly between frames.
pub fn read_frame<R: Read>(r: &mut R) -> Result<Option<Vec<u8>>, ProtocolError> {
    let mut len = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        match r.read(&mut len[got..]) {
            Ok(0) if got == 0 => return Ok(None),
            Ok(0) => return Err(io::Error::from(io::ErrorKind::UnexpectedEof).into()),
            Ok(n) => got += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    let len = u32::from_be_bytes(len) as usize;
    if len > MAX_FRAME {
        return Err(ProtocolError::FrameTooLarge(len));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    Ok(Some(buf))
}

pub fn write_frame<W: Write>(w: &mut W, payload: &[u8]) -> Result<(), ProtocolError> {
    if payload.len() > MAX_FRAME {
        return Err(ProtocolError::FrameTooLarge(payload.len()));
    }
    let mut frame = Vec::with_capacity(payload.len() + 4);
    frame.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    frame.extend_from_slice(payload);
    w.write_all(&frame)?;
    w.flush()?;
    Ok(())
}

pub fn write_message<W: Write, T: Serialize>(w: &mut W, msg: &T) -> Result<(), ProtocolError> {
    write_frame(w, &serde_json::to_vec(msg).expect("message serializes"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientMessage {
    pub seq: u64,
    pub event: InputEvent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartInfo {
    pub kind: ChartKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewPoint {
    pub id: usize,
    pub series: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewRegion {
    pub node: NodeId,
    pub label: String,
    pub rect: Rect,
    pub focused: bool,
}

/// What the client needs to draw: points in screen space and, in
/// navigation mode, the touch regions of the focused page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct View {
    pub mode: Mode,
    pub screen: ScreenSize,
    pub viewport: Viewport,
    pub points: Vec<ViewPoint>,
    pub page: usize,
    pub page_count: usize,
    pub regions: Vec<ViewRegion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Snapshot {
        chart: ChartInfo,
        view: View,
        feedback: Vec<FeedbackEvent>,
    },
    Batch {
        seq: u64,
        feedback: Vec<FeedbackEvent>,
        /// Present when the view changed since the last message.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        view: Option<View>,
    },
    Error {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seq: Option<u64>,
        message: String,
    },
}

pub fn chart_info(engine: &Engine) -> ChartInfo {
    let spec = &engine.model.spec;
    ChartInfo {
        kind: spec.kind,
        title: spec.title.clone(),
        x_label: spec.x_label.clone(),
        y_label: spec.y_label.clone(),
        series_names: spec.series_names.clone(),
    }
}

pub fn view_of(engine: &Engine, state: &InteractionState) -> View {
    let screen = engine.config.screen;
    let viewport = match state.mode {
        Mode::Snf => engine.model.full_viewport(),
        Mode::Dtm => state.viewport,
    };
    let points = engine
        .model
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| state.filters[p.series_index])
        .map(|(id, p)| {
            let q = data_to_screen(DataPos::new(p.x, p.y), &viewport, screen);
            ViewPoint {
                id,
                series: p.series_index,
                x: q.x,
                y: q.y,
            }
        })
        .collect();
    let (page, pages, regions) = match state.mode {
        Mode::Dtm => (0, 0, Vec::new()),
        Mode::Snf => {
            let node = state.focus.node;
            let siblings = engine.tree.siblings(node);
            let axis = engine.tree.layout_axis(node);
            let layout = layout_page(siblings, axis, screen, state.focus.page, engine.config.snf.min_touch_px)
                .expect("focus page exists");
            let cache = RepeatCache::new();
            let regions = layout
                .regions
                .iter()
                .map(|&(id, rect)| ViewRegion {
                    node: id,
                    label: describe_node(
                        &engine.model,
                        &engine.tree,
                        id,
                        NavContext::new_position(None),
                        &cache,
                        &state.filters,
                        state.active_series,
                    ),
                    rect,
                    focused: id == node,
                })
                .collect();
            (state.focus.page, page_count(siblings.len(), layout.per_page), regions)
        }
    };
    View {
        mode: state.mode,
        screen,
        viewport,
        points,
        page,
        page_count: pages,
        regions,
    }
}
