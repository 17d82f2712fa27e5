//! The session state machine: abstract gestures in, ordered feedback out.
//!
//! [`Engine`] holds everything immutable about a chart (model, semantic tree,
//! constants). [`InteractionState`] is the per-session mutable part and
//! [`Engine::dispatch`] is a pure transition function over it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::dtm::{
    self, apply_pinch, lock_cell, lock_update, project, project_to_x, scan_update, split_tap_info,
    step_tones, DtmView, LockState, ScanState, ThrottleState,
};
use crate::geometry::{screen_to_data, DataPos, ScreenPoint, Viewport};
use crate::model::{ChartKind, ChartModel};
use crate::narration::{self, counted_series, describe_node, interval_text, NavContext, RepeatCache};
use crate::sonification::{
    bin_series_sequence, numb_tone, series_cell_sequence, series_overview_sequence, tone_for_cell,
    value_tone, ToneSpec,
};
use crate::tree::{
    hit_test, interval_index, per_page, Axis, Level, NodeId, NodePayload, SemanticTree, ZoneKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwipeDirection {
    Left,
    Right,
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoldMove {
    Up,
    Down,
    Left,
    Right,
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    Cw,
    Ccw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlickDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageDirection {
    Left,
    Right,
}

/// Recognized gestures. Raw multi-touch recognition is the client's job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gesture {
    TouchDown,
    TouchMove,
    TouchUp,
    Swipe { direction: SwipeDirection },
    DoubleTap,
    DoubleTapHoldMove { direction: HoldMove },
    ZScrub,
    RotorRotate { direction: Rotation },
    RotorFlick { direction: FlickDirection },
    Pinch { scale: f64, focus: ScreenPoint },
    SplitTap,
    ThreeFingerSwipe { direction: PageDirection },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputEvent {
    pub time: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<ScreenPoint>,
    #[serde(flatten)]
    pub gesture: Gesture,
}

impl InputEvent {
    pub fn new(time: u64, gesture: Gesture) -> Self {
        Self {
            time,
            position: None,
            gesture,
        }
    }

    pub fn at(time: u64, gesture: Gesture, x: f64, y: f64) -> Self {
        Self {
            time,
            position: Some(ScreenPoint::new(x, y)),
            gesture,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Earcon {
    /// The gesture has no meaning here.
    Unavailable,
    PageChange,
    /// The finger is still on the element it last announced.
    Hover,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Feedback {
    Speech { text: String },
    Tone { tone: ToneSpec },
    ToneSequence { tones: Vec<ToneSpec> },
    Haptic { pulses: usize },
    ModeAnnouncement { text: String },
    Earcon { earcon: Earcon },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub time: u64,
    #[serde(flatten)]
    pub feedback: Feedback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Snf,
    Dtm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotor {
    Series,
    Sonification,
}

impl Rotor {
    fn name(self) -> &'static str {
        match self {
            Rotor::Series => "Series",
            Rotor::Sonification => "Sonification",
        }
    }

    fn next(self) -> Rotor {
        match self {
            Rotor::Series => Rotor::Sonification,
            Rotor::Sonification => Rotor::Series,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Focus {
    pub node: NodeId,
    pub page: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionState {
    pub mode: Mode,
    /// In direct touch mode this is where navigation mode resumes.
    pub focus: Focus,
    pub active_rotor: Rotor,
    pub sonification_on: bool,
    /// `None` selects the all-series overview.
    pub active_series: Option<usize>,
    pub filters: Vec<bool>,
    pub viewport: Viewport,
    pub scan: ScanState,
    pub lock: LockState,
    pub throttle: ThrottleState,
    pub repeat_cache: RepeatCache,
    /// Last finger position of any touch, for split-tap without a position.
    pub last_touch: Option<ScreenPoint>,
    /// Data position of the last touch made in direct touch mode.
    pub dtm_touch: Option<DataPos>,
    pub dtm_zoomed: bool,
    /// A pan is in progress in direct touch mode.
    pub gesture_active: bool,
    pub last_emitted_pos: Option<ScreenPoint>,
    /// Focus and viewport at the last switch back to navigation mode, so an
    /// immediate switch back restores the same view.
    pub dtm_resume: Option<(Focus, Viewport)>,
}

/// Immutable per-chart context shared by every session on that chart.
#[derive(Debug, Clone)]
pub struct Engine {
    pub model: ChartModel,
    pub tree: SemanticTree,
    pub config: EngineConfig,
}

struct Out {
    time: u64,
    events: Vec<FeedbackEvent>,
}

impl Out {
    fn push(&mut self, feedback: Feedback) {
        self.events.push(FeedbackEvent {
            time: self.time,
            feedback,
        });
    }

    fn speech(&mut self, text: impl Into<String>) {
        self.push(Feedback::Speech { text: text.into() });
    }

    fn earcon(&mut self, earcon: Earcon) {
        self.push(Feedback::Earcon { earcon });
    }
}

fn sanitize(p: Option<ScreenPoint>) -> Option<ScreenPoint> {
    p.filter(|q| q.is_finite())
}

impl Engine {
    pub fn new(model: ChartModel, config: EngineConfig) -> Self {
        let tree = SemanticTree::build(&model, config.grid);
        Self {
            model,
            tree,
            config,
        }
    }

    /// Initial state plus the narration spoken when the chart opens.
    pub fn open(&self) -> (InteractionState, Vec<FeedbackEvent>) {
        let root = self.tree.root();
        let mut state = InteractionState {
            mode: Mode::Snf,
            focus: Focus { node: root, page: 0 },
            active_rotor: Rotor::Series,
            sonification_on: false,
            active_series: None,
            filters: vec![true; self.model.series_count()],
            viewport: self.model.full_viewport(),
            scan: ScanState::from_config(&self.config.dtm),
            lock: LockState::default(),
            throttle: ThrottleState::new(self.config.dtm.min_interval_ms),
            repeat_cache: RepeatCache::new(),
            last_touch: None,
            dtm_touch: None,
            dtm_zoomed: false,
            gesture_active: false,
            last_emitted_pos: None,
            dtm_resume: None,
        };
        let mut out = Out {
            time: 0,
            events: Vec::new(),
        };
        self.node_feedback(&mut state, root, NavContext::new_position(None), &mut out);
        (state, out.events)
    }

    /// Handles one event. Total: every event in every state has a defined
    /// outcome, possibly just an "unavailable" earcon.
    pub fn dispatch(&self, state: &InteractionState, event: &InputEvent) -> (InteractionState, Vec<FeedbackEvent>) {
        let mut s = state.clone();
        let mut out = Out {
            time: event.time,
            events: Vec::new(),
        };
        let pos = sanitize(event.position);
        match s.mode {
            Mode::Snf => self.dispatch_snf(&mut s, event, pos, &mut out),
            Mode::Dtm => self.dispatch_dtm(&mut s, event, pos, &mut out),
        }
        (s, out.events)
    }

    fn dispatch_snf(&self, s: &mut InteractionState, event: &InputEvent, pos: Option<ScreenPoint>, out: &mut Out) {
        match event.gesture {
            Gesture::TouchDown => self.snf_touch(s, pos, true, out),
            Gesture::TouchMove => self.snf_touch(s, pos, false, out),
            Gesture::TouchUp => {}
            Gesture::Swipe { direction } => match direction {
                SwipeDirection::Right => self.move_sibling(s, 1, out),
                SwipeDirection::Left => self.move_sibling(s, -1, out),
                SwipeDirection::Up | SwipeDirection::Down => out.earcon(Earcon::Unavailable),
            },
            Gesture::DoubleTap => self.drill_down(s, out),
            Gesture::ZScrub => self.level_up(s, out),
            Gesture::ThreeFingerSwipe { direction } => {
                let delta = match direction {
                    PageDirection::Left => 1,
                    PageDirection::Right => -1,
                };
                self.change_page(s, delta, out);
            }
            Gesture::RotorRotate { .. } | Gesture::RotorFlick { .. } => self.rotor(s, event.gesture, out),
            Gesture::DoubleTapHoldMove { direction } => {
                let zone = match direction {
                    HoldMove::Up => ZoneKind::YAxis,
                    HoldMove::Down => ZoneKind::XAxis,
                    HoldMove::Left => ZoneKind::Filters,
                    HoldMove::Right => ZoneKind::DataPoints,
                    HoldMove::Hold => return self.transition(s, out),
                };
                let node = self.tree.zone(zone);
                let prev = s.focus.node;
                s.focus = Focus { node, page: 0 };
                self.node_feedback(s, node, NavContext::new_position(Some(prev)), out);
            }
            Gesture::Pinch { .. } | Gesture::SplitTap => out.earcon(Earcon::Unavailable),
        }
    }

    fn dispatch_dtm(&self, s: &mut InteractionState, event: &InputEvent, pos: Option<ScreenPoint>, out: &mut Out) {
        match event.gesture {
            Gesture::TouchDown | Gesture::TouchMove => {
                if let Some(p) = pos {
                    self.dtm_touch(s, self.config.screen.clamp(p), event.time, out);
                }
            }
            Gesture::TouchUp => self.dtm_release(s, pos, event.time, out),
            Gesture::Pinch { scale, focus } => {
                if !(scale.is_finite() && scale > 0.0 && focus.is_finite()) {
                    out.earcon(Earcon::Unavailable);
                    return;
                }
                let full = self.model.full_viewport();
                let mut vp = apply_pinch(&s.viewport, scale, focus, self.config.screen, &full);
                if self.model.kind() != ChartKind::Scatter {
                    vp.y_lo = full.y_lo;
                    vp.y_hi = full.y_hi;
                }
                if vp != s.viewport {
                    s.dtm_zoomed = true;
                }
                s.viewport = vp;
                self.retain_visible_hits(s);
                out.speech(format!(
                    "Zoomed, {}",
                    interval_text(&self.model, Axis::X, vp.x_lo, vp.x_hi)
                ));
            }
            Gesture::SplitTap => match pos.or(s.last_touch) {
                Some(p) => {
                    let series = self.explorable_series(s);
                    let label = match (s.active_series, series.as_slice()) {
                        (Some(i), _) | (None, &[i]) => self.model.series_name(i).to_string(),
                        (None, _) => "all series".to_string(),
                    };
                    let view = self.view(s, &series);
                    out.speech(split_tap_info(&view, self.config.screen.clamp(p), &label));
                }
                None => out.earcon(Earcon::Unavailable),
            },
            Gesture::Swipe { direction } => match direction {
                SwipeDirection::Down => self.cycle_series(s, 1, out),
                SwipeDirection::Up => self.cycle_series(s, -1, out),
                SwipeDirection::Left | SwipeDirection::Right => out.earcon(Earcon::Unavailable),
            },
            Gesture::DoubleTapHoldMove {
                direction: HoldMove::Hold,
            } => self.transition(s, out),
            _ => out.earcon(Earcon::Unavailable),
        }
    }

    // ----- navigation mode -------------------------------------------------

    fn per_page_of(&self, node: NodeId) -> usize {
        per_page(
            self.tree.layout_axis(node),
            self.config.screen,
            self.config.snf.min_touch_px,
        )
    }

    fn page_of(&self, node: NodeId) -> usize {
        self.tree.sibling_index(node) / self.per_page_of(node)
    }

    fn snf_touch(&self, s: &mut InteractionState, pos: Option<ScreenPoint>, is_down: bool, out: &mut Out) {
        let current = s.focus.node;
        let Some(p) = pos else {
            self.node_feedback(s, current, NavContext::repeat(current), out);
            return;
        };
        let p = self.config.screen.clamp(p);
        s.last_touch = Some(p);
        let siblings = self.tree.siblings(current);
        let layout = crate::tree::layout_page(
            siblings,
            self.tree.layout_axis(current),
            self.config.screen,
            s.focus.page,
            self.config.snf.min_touch_px,
        )
        .expect("focus page exists");
        let target = hit_test(&layout, p, self.config.screen).expect("clamped point is on screen");
        if target == current {
            if is_down {
                self.node_feedback(s, current, NavContext::repeat(current), out);
            } else {
                out.earcon(Earcon::Hover);
            }
            return;
        }
        let from = self.tree.sibling_index(current) as i64;
        let to = self.tree.sibling_index(target) as i64;
        let ctx = if !is_down && (from - to).abs() == 1 {
            NavContext::adjacent(current)
        } else {
            NavContext::new_position(Some(current))
        };
        s.focus.node = target;
        self.node_feedback(s, target, ctx, out);
    }

    fn move_sibling(&self, s: &mut InteractionState, delta: i64, out: &mut Out) {
        let current = s.focus.node;
        let siblings = self.tree.siblings(current);
        let idx = self.tree.sibling_index(current) as i64 + delta;
        if idx < 0 || idx >= siblings.len() as i64 {
            out.earcon(Earcon::Unavailable);
            return;
        }
        let target = siblings[idx as usize];
        let page = self.page_of(target);
        if page != s.focus.page {
            out.earcon(Earcon::PageChange);
        }
        s.focus = Focus { node: target, page };
        self.node_feedback(s, target, NavContext::adjacent(current), out);
    }

    fn drill_down(&self, s: &mut InteractionState, out: &mut Out) {
        let current = s.focus.node;
        let node = self.tree.node(current);
        if let NodePayload::FilterToggle { series } = node.payload {
            let (next, events) = self.toggle_series_filter(s, series, out.time);
            *s = next;
            out.events.extend(events);
            return;
        }
        match node.children.first() {
            Some(&child) => {
                s.focus = Focus { node: child, page: 0 };
                self.node_feedback(s, child, NavContext::new_position(Some(current)), out);
            }
            None => self.node_feedback(s, current, NavContext::repeat(current), out),
        }
    }

    fn level_up(&self, s: &mut InteractionState, out: &mut Out) {
        let current = s.focus.node;
        match self.tree.node(current).parent {
            Some(parent) => {
                s.focus = Focus {
                    node: parent,
                    page: self.page_of(parent),
                };
                self.node_feedback(s, parent, NavContext::new_position(Some(current)), out);
            }
            None => out.earcon(Earcon::Unavailable),
        }
    }

    fn change_page(&self, s: &mut InteractionState, delta: i64, out: &mut Out) {
        let current = s.focus.node;
        let siblings = self.tree.siblings(current);
        let per = self.per_page_of(current);
        let pages = crate::tree::page_count(siblings.len(), per) as i64;
        let page = s.focus.page as i64 + delta;
        if page < 0 || page >= pages {
            out.earcon(Earcon::Unavailable);
            return;
        }
        let page = page as usize;
        let target = siblings[page * per];
        s.focus = Focus { node: target, page };
        out.earcon(Earcon::PageChange);
        out.speech(format!("Page {} of {}", page + 1, pages));
        self.node_feedback(s, target, NavContext::new_position(Some(current)), out);
    }

    fn rotor(&self, s: &mut InteractionState, gesture: Gesture, out: &mut Out) {
        match gesture {
            Gesture::RotorRotate { .. } => {
                // Two rotors: either direction moves to the other one.
                s.active_rotor = s.active_rotor.next();
                out.speech(s.active_rotor.name());
            }
            Gesture::RotorFlick { direction } => match s.active_rotor {
                Rotor::Series => {
                    let delta = match direction {
                        FlickDirection::Down => 1,
                        FlickDirection::Up => -1,
                    };
                    self.cycle_series(s, delta, out);
                }
                Rotor::Sonification => {
                    s.sonification_on = !s.sonification_on;
                    out.speech(if s.sonification_on {
                        "Sonification on"
                    } else {
                        "Sonification off"
                    });
                }
            },
            _ => out.earcon(Earcon::Unavailable),
        }
    }

    /// Steps through `[overview, s0, s1, ...]` cyclically.
    fn cycle_series(&self, s: &mut InteractionState, delta: i64, out: &mut Out) {
        let n = self.model.series_count() as i64 + 1;
        let current = s.active_series.map_or(0, |i| i as i64 + 1);
        let next = (current + delta).rem_euclid(n);
        s.active_series = if next == 0 { None } else { Some(next as usize - 1) };
        let text = match s.active_series {
            None => "Overview, all series".to_string(),
            Some(i) if !s.filters[i] => format!("{}, hidden", self.model.series_name(i)),
            Some(i) => self.model.series_name(i).to_string(),
        };
        self.retain_visible_hits(s);
        out.speech(text);
    }

    /// Flips a series filter. The last visible series cannot be hidden.
    pub fn toggle_series_filter(
        &self,
        state: &InteractionState,
        series: usize,
        time: u64,
    ) -> (InteractionState, Vec<FeedbackEvent>) {
        let mut s = state.clone();
        let mut out = Out {
            time,
            events: Vec::new(),
        };
        let visible = s.filters.iter().filter(|v| **v).count();
        if series >= s.filters.len() || (s.filters[series] && visible == 1) {
            out.earcon(Earcon::Unavailable);
            return (s, out.events);
        }
        s.filters[series] = !s.filters[series];
        out.speech(format!(
            "{} {}",
            self.model.series_name(series),
            if s.filters[series] { "shown" } else { "hidden" }
        ));
        self.retain_visible_hits(&mut s);
        (s, out.events)
    }

    /// Speech or tones for landing on `node`.
    fn node_feedback(&self, s: &mut InteractionState, node: NodeId, ctx: NavContext, out: &mut Out) {
        let son = &self.config.sonification;
        let payload = &self.tree.node(node).payload;
        let visible_series: Vec<usize> = (0..s.filters.len()).filter(|&i| s.filters[i]).collect();

        if s.sonification_on {
            let tones: Option<Vec<ToneSpec>> = match payload {
                NodePayload::Bin { axis, .. } => {
                    let series = counted_series(s.active_series, &s.filters);
                    let seq = match (self.model.kind(), s.active_series) {
                        (ChartKind::Scatter, Some(a)) if s.filters[a] => {
                            crate::sonification::bin_tone_sequence(son, &self.tree, node, a)
                                .unwrap_or_default()
                        }
                        _ => bin_series_sequence(son, &self.model, &self.tree, node, &series),
                    };
                    let _ = axis;
                    Some(if seq.is_empty() { vec![numb_tone(son)] } else { seq })
                }
                NodePayload::SeriesInBin { series, .. } if s.filters[*series] => {
                    let axis = self.tree.bin_axis_of(node).unwrap_or(Axis::X);
                    Some(series_cell_sequence(son, &self.tree, node, self.tree.max_cell_count(axis)))
                }
                NodePayload::Cell { point_ids, .. } => {
                    let axis = self.tree.bin_axis_of(node).unwrap_or(Axis::X);
                    let series = match self.tree.node(node).parent.map(|p| &self.tree.node(p).payload) {
                        Some(NodePayload::SeriesInBin { series, .. }) => *series,
                        _ => 0,
                    };
                    Some(vec![tone_for_cell(
                        son,
                        point_ids.len(),
                        self.tree.max_cell_count(axis),
                        series,
                    )])
                }
                NodePayload::Point { point_id } => {
                    Some(vec![value_tone(son, self.model.points[*point_id].y, self.model.y_range)])
                }
                _ => None,
            };
            if let Some(tones) = tones {
                match <[ToneSpec; 1]>::try_from(tones) {
                    Ok([tone]) => out.push(Feedback::Tone { tone }),
                    Err(tones) => out.push(Feedback::ToneSequence { tones }),
                }
                return;
            }
        }

        let text = describe_node(
            &self.model,
            &self.tree,
            node,
            ctx,
            &s.repeat_cache,
            &s.filters,
            s.active_series,
        );
        s.repeat_cache.insert(node, text.clone());
        out.speech(text);
        if s.sonification_on && self.tree.node(node).level == Level::Overview {
            out.push(Feedback::ToneSequence {
                tones: series_overview_sequence(son, &self.model, &visible_series),
            });
        }
    }

    // ----- direct touch mode -----------------------------------------------

    fn explorable_series(&self, s: &InteractionState) -> Vec<usize> {
        counted_series(s.active_series, &s.filters)
    }

    fn view<'a>(&'a self, s: &'a InteractionState, series: &'a [usize]) -> DtmView<'a> {
        DtmView {
            model: &self.model,
            viewport: &s.viewport,
            screen: self.config.screen,
            series,
            dtm: &self.config.dtm,
            sonification: &self.config.sonification,
        }
    }

    fn retain_visible_hits(&self, s: &mut InteractionState) {
        if s.scan.indices_within_radius.is_empty() {
            return;
        }
        let series = self.explorable_series(s);
        let visible: Vec<usize> = self.view(s, &series).visible_points().into_iter().map(|(id, _)| id).collect();
        s.scan.indices_within_radius.retain(|id| visible.contains(id));
    }

    fn dtm_touch(&self, s: &mut InteractionState, p: ScreenPoint, now: u64, out: &mut Out) {
        s.last_touch = Some(p);
        s.gesture_active = true;
        let data = screen_to_data(p, &s.viewport, self.config.screen);
        s.dtm_touch = Some(data);
        let series = self.explorable_series(s);
        match self.model.kind() {
            ChartKind::Line | ChartKind::Bar => {
                let view = self.view(s, &series);
                let (proj, throttle) = project_to_x(&view, &s.throttle, p, now);
                s.throttle = throttle;
                if let Some(proj) = proj {
                    s.last_emitted_pos = Some(p);
                    out.push(Feedback::Tone { tone: proj.tone });
                    if proj.contact {
                        out.push(Feedback::Haptic { pulses: 1 });
                    }
                }
            }
            ChartKind::Scatter => {
                let points = self.view(s, &series).visible_points();
                let scan = scan_update(&s.scan, p, &points);
                s.scan = scan.scan;
                if scan.haptic_count > 0 {
                    out.push(Feedback::Haptic {
                        pulses: scan.haptic_count,
                    });
                }
                let full = self.model.full_viewport();
                let cell = lock_cell(
                    self.tree.edges(Axis::X),
                    self.tree.edges(Axis::Y),
                    data.x.clamp(full.x_lo, full.x_hi),
                    data.y.clamp(full.y_lo, full.y_hi),
                );
                let (step, lock) = lock_update(&s.lock, cell);
                s.lock = lock;
                if let Some(step) = step {
                    out.push(Feedback::ToneSequence {
                        tones: step_tones(&self.config.dtm, step),
                    });
                }
            }
        }
    }

    /// End of a pan. On line/bar charts the final position always sounds,
    /// scheduled no earlier than the throttle allows.
    fn dtm_release(&self, s: &mut InteractionState, pos: Option<ScreenPoint>, now: u64, out: &mut Out) {
        if !s.gesture_active {
            return;
        }
        let final_pos = pos.map(|p| self.config.screen.clamp(p)).or(s.last_touch);
        if let Some(p) = final_pos {
            s.last_touch = Some(p);
            s.dtm_touch = Some(screen_to_data(p, &s.viewport, self.config.screen));
        }
        if self.model.kind() == ChartKind::Scatter {
            s.scan.indices_within_radius.clear();
            s.lock = LockState::default();
        } else if let Some(p) = final_pos {
            if s.last_emitted_pos != Some(p) {
                let series = self.explorable_series(s);
                if let Some(proj) = project(&self.view(s, &series), p) {
                    let at = match s.throttle.last_emit_time {
                        Some(last) => now.max(last + s.throttle.min_interval),
                        None => now,
                    };
                    s.throttle.last_emit_time = Some(at);
                    s.last_emitted_pos = Some(p);
                    out.events.push(FeedbackEvent {
                        time: at,
                        feedback: Feedback::Tone { tone: proj.tone },
                    });
                    if proj.contact {
                        out.events.push(FeedbackEvent {
                            time: at,
                            feedback: Feedback::Haptic { pulses: 1 },
                        });
                    }
                }
            }
        }
        s.gesture_active = false;
        s.last_emitted_pos = None;
    }

    // ----- mode transitions ------------------------------------------------

    /// X extent a direct-touch viewport should show for `node`: the span of
    /// the enclosing x bin's data, or its interval when that is degenerate.
    fn bin_x_extent(&self, node: NodeId) -> Option<(f64, f64)> {
        let bin = self.tree.enclosing_bin(node)?;
        match &self.tree.node(bin).payload {
            NodePayload::Bin {
                axis: Axis::X,
                interval,
                point_ids,
                ..
            } => {
                let lo = point_ids.iter().map(|&i| self.model.points[i].x).fold(f64::INFINITY, f64::min);
                let hi = point_ids
                    .iter()
                    .map(|&i| self.model.points[i].x)
                    .fold(f64::NEG_INFINITY, f64::max);
                if lo < hi {
                    Some((lo, hi))
                } else {
                    Some((interval.lo, interval.hi))
                }
            }
            _ => None,
        }
    }

    fn transition(&self, s: &mut InteractionState, out: &mut Out) {
        let (next, events) = self.transition_mode(s, out.time);
        *s = next;
        out.events.extend(events);
    }

    /// Switches between navigation and direct touch, keeping the user's place.
    pub fn transition_mode(&self, state: &InteractionState, time: u64) -> (InteractionState, Vec<FeedbackEvent>) {
        let mut s = state.clone();
        let mut out = Out {
            time,
            events: Vec::new(),
        };
        let full = self.model.full_viewport();
        match s.mode {
            Mode::Snf => {
                let resume = s.dtm_resume.filter(|(focus, _)| *focus == s.focus);
                s.viewport = match resume {
                    Some((_, vp)) => vp,
                    None => match self.bin_x_extent(s.focus.node) {
                        Some((lo, hi)) => Viewport::new(lo, hi, full.y_lo, full.y_hi),
                        None => full,
                    },
                };
                s.mode = Mode::Dtm;
                s.scan = ScanState::from_config(&self.config.dtm);
                s.lock = LockState::default();
                s.throttle = ThrottleState::new(self.config.dtm.min_interval_ms);
                s.dtm_touch = None;
                s.dtm_zoomed = false;
                s.gesture_active = false;
                s.last_emitted_pos = None;
                let text = self.focus_text(&mut s);
                out.push(Feedback::ModeAnnouncement {
                    text: format!("Direct touch mode, {text}"),
                });
            }
            Mode::Dtm => {
                let landing = match (s.dtm_touch, s.dtm_zoomed) {
                    (Some(p), _) => Some(p),
                    (None, true) => Some(s.viewport.center()),
                    (None, false) => None,
                };
                if let Some(p) = landing {
                    let p = DataPos::new(p.x.clamp(full.x_lo, full.x_hi), p.y.clamp(full.y_lo, full.y_hi));
                    let node = self.relocate(s.focus.node, p);
                    s.focus = Focus {
                        node,
                        page: self.page_of(node),
                    };
                }
                s.dtm_resume = Some((s.focus, s.viewport));
                s.mode = Mode::Snf;
                s.viewport = full;
                s.scan.indices_within_radius.clear();
                s.lock = LockState::default();
                s.gesture_active = false;
                s.last_emitted_pos = None;
                let text = self.focus_text(&mut s);
                out.push(Feedback::ModeAnnouncement {
                    text: format!("Navigation mode, {text}"),
                });
            }
        }
        (s, out.events)
    }

    fn focus_text(&self, s: &mut InteractionState) -> String {
        let node = s.focus.node;
        let text = describe_node(
            &self.model,
            &self.tree,
            node,
            NavContext::new_position(None),
            &s.repeat_cache,
            &s.filters,
            s.active_series,
        );
        s.repeat_cache.insert(node, text.clone());
        text
    }

    /// The node at the same level as `from` whose interval holds `p`.
    fn relocate(&self, from: NodeId, p: DataPos) -> NodeId {
        let tree = &self.tree;
        let node = tree.node(from);
        let coord = |axis: Axis| match axis {
            Axis::X => p.x,
            Axis::Y => p.y,
        };
        let cross = |axis: Axis| match axis {
            Axis::X => p.y,
            Axis::Y => p.x,
        };
        match &node.payload {
            NodePayload::Overview | NodePayload::Zone(_) | NodePayload::FilterToggle { .. } => from,
            NodePayload::Bin { axis, .. } => tree.bin_containing(*axis, coord(*axis)),
            NodePayload::SeriesInBin { series, .. } => {
                let axis = tree.bin_axis_of(from).unwrap_or(Axis::X);
                let bin = tree.bin_containing(axis, coord(axis));
                tree.node(bin).children.get(*series).copied().unwrap_or(bin)
            }
            NodePayload::Cell { .. } => {
                let axis = tree.bin_axis_of(from).unwrap_or(Axis::X);
                let series = match node.parent.map(|q| &tree.node(q).payload) {
                    Some(NodePayload::SeriesInBin { series, .. }) => *series,
                    _ => 0,
                };
                let bin = tree.bin_containing(axis, coord(axis));
                let Some(&sub) = tree.node(bin).children.get(series) else {
                    return bin;
                };
                let cross_axis = match axis {
                    Axis::X => Axis::Y,
                    Axis::Y => Axis::X,
                };
                let idx = interval_index(tree.edges(cross_axis), cross(axis));
                tree.node(sub).children.get(idx).copied().unwrap_or(sub)
            }
            NodePayload::Point { .. } => {
                let parent = node.parent.unwrap_or(tree.root());
                let (candidates, axis) = match &tree.node(parent).payload {
                    NodePayload::Bin { axis, .. } => {
                        let bin = tree.bin_containing(*axis, coord(*axis));
                        (tree.node(bin).children.clone(), Some(*axis))
                    }
                    _ => (tree.node(parent).children.clone(), None),
                };
                let xs = self.model.x_range.span();
                let ys = self.model.y_range.span();
                let distance = |id: NodeId| -> f64 {
                    let NodePayload::Point { point_id } = tree.node(id).payload else {
                        return f64::INFINITY;
                    };
                    let q = &self.model.points[point_id];
                    match (axis, self.model.kind()) {
                        (Some(Axis::X), _) | (None, ChartKind::Line | ChartKind::Bar) => (q.x - p.x).abs(),
                        (Some(Axis::Y), _) => (q.y - p.y).abs(),
                        (None, ChartKind::Scatter) => ((q.x - p.x) / xs).hypot((q.y - p.y) / ys),
                    }
                };
                let best = candidates
                    .iter()
                    .copied()
                    .min_by(|&a, &b| distance(a).total_cmp(&distance(b)));
                match best {
                    Some(n) => n,
                    None => match axis {
                        Some(axis) => tree.bin_containing(axis, coord(axis)),
                        None => from,
                    },
                }
            }
        }
    }

    /// Checks every state invariant; used by the fuzz and acceptance suites.
    pub fn check_state(&self, s: &InteractionState) -> Result<(), String> {
        if !self.tree.contains(s.focus.node) {
            return Err(format!("focus {:?} does not exist", s.focus.node));
        }
        let node = s.focus.node;
        let layout = crate::tree::layout_page(
            self.tree.siblings(node),
            self.tree.layout_axis(node),
            self.config.screen,
            s.focus.page,
            self.config.snf.min_touch_px,
        )
        .map_err(|e| format!("focus page: {e}"))?;
        if !layout.regions.iter().any(|(id, _)| *id == node) {
            return Err(format!("focus {:?} not on page {}", node, s.focus.page));
        }
        if !s.viewport.is_valid() || !s.viewport.within(&self.model.full_viewport()) {
            return Err(format!("viewport {:?} invalid", s.viewport));
        }
        if s.filters.len() != self.model.series_count() || !s.filters.iter().any(|v| *v) {
            return Err("no visible series".into());
        }
        if let Some(a) = s.active_series {
            if a >= self.model.series_count() {
                return Err(format!("active series {a} out of range"));
            }
        }
        if s.scan.min_rad > s.scan.max_rad || s.scan.radius_cover_distance == 0 {
            return Err("scan radius bounds".into());
        }
        let series = self.explorable_series(s);
        let visible: Vec<usize> = self.view(s, &series).visible_points().into_iter().map(|(id, _)| id).collect();
        if s.scan.indices_within_radius.iter().any(|id| !visible.contains(id)) {
            return Err("scan hit set includes points outside the viewport".into());
        }
        if s.mode == Mode::Snf && !s.scan.indices_within_radius.is_empty() {
            return Err("scan hits in navigation mode".into());
        }
        Ok(())
    }
}

/// One engine plus one session state.
#[derive(Debug, Clone)]
pub struct Session {
    engine: Arc<Engine>,
    state: InteractionState,
    opening: Vec<FeedbackEvent>,
}

impl Session {
    pub fn new(engine: Arc<Engine>) -> Self {
        let (state, opening) = engine.open();
        Self {
            engine,
            state,
            opening,
        }
    }

    /// Feedback produced when the chart opened.
    pub fn opening(&self) -> &[FeedbackEvent] {
        &self.opening
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn state(&self) -> &InteractionState {
        &self.state
    }

    pub fn dispatch(&mut self, event: &InputEvent) -> Vec<FeedbackEvent> {
        let (next, feedback) = self.engine.dispatch(&self.state, event);
        self.state = next;
        feedback
    }
}

pub use dtm::StepTone;
pub use narration::MoveKind;
