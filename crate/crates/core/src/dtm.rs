//! Direct touch mapping: the finger addresses chart space directly.
//!
//! Line and bar charts behave like a slider over the X axis. Scatter plots
//! use a scanning window whose radius follows the local point density, plus
//! a directional lock that warns when a straight sweep drifts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::{DtmConfig, SonificationConfig};
use crate::geometry::{
    data_to_screen, distance_to_box, distance_to_segment, screen_to_data, ScreenPoint, ScreenSize,
    Viewport,
};
use crate::model::{ChartKind, ChartModel};
use crate::sonification::{value_tone, ToneSpec, Timbre};
use crate::tree::interval_index;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanState {
    pub indices_within_radius: BTreeSet<usize>,
    pub radius_cover_distance: usize,
    pub min_rad: f64,
    pub max_rad: f64,
}

impl ScanState {
    pub fn new(radius_cover_distance: usize, min_rad: f64, max_rad: f64) -> Self {
        Self {
            indices_within_radius: BTreeSet::new(),
            radius_cover_distance: radius_cover_distance.max(1),
            min_rad: min_rad.min(max_rad),
            max_rad,
        }
    }

    pub fn from_config(cfg: &DtmConfig) -> Self {
        Self::new(cfg.radius_cover_distance, cfg.min_rad_px, cfg.max_rad_px)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub haptic_count: usize,
    pub adjusted_radius: f64,
    pub scan: ScanState,
}

/// One step of the dynamic scanning radius.
///
/// The radius is the distance to the `radius_cover_distance`-th nearest
/// point, clamped to `[min_rad, max_rad]`. Every point within it is "hit";
/// each point that was not hit on the previous step fires one pulse.
pub fn scan_update(scan: &ScanState, pos: ScreenPoint, points: &[(usize, ScreenPoint)]) -> ScanOutcome {
    let mut sorted: Vec<(f64, usize)> = points.iter().map(|&(id, p)| (pos.distance(p), id)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let adjusted_radius = match sorted.len() {
        0 => scan.min_rad,
        n => {
            let k = scan.radius_cover_distance.max(1).min(n) - 1;
            sorted[k].0.clamp(scan.min_rad, scan.max_rad)
        }
    };
    let hits: BTreeSet<usize> = sorted
        .iter()
        .take_while(|(d, _)| *d <= adjusted_radius)
        .map(|&(_, id)| id)
        .collect();
    let haptic_count = hits.difference(&scan.indices_within_radius).count();
    ScanOutcome {
        haptic_count,
        adjusted_radius,
        scan: ScanState {
            indices_within_radius: hits,
            ..scan.clone()
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridCell {
    pub col: usize,
    /// Counted from the top of the screen.
    pub row: usize,
}

impl GridCell {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LockPhase {
    Unlocked,
    Armed,
    Locked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LockDirection {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepTone {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockState {
    pub phase: LockPhase,
    /// Direction and the fixed row (horizontal) or column (vertical) of the
    /// lock. Kept after a deviation so the user can find their way back.
    pub direction: Option<LockDirection>,
    pub locked_line: Option<usize>,
    pub recent_cells: Vec<GridCell>,
}

impl Default for LockState {
    fn default() -> Self {
        Self {
            phase: LockPhase::Unlocked,
            direction: None,
            locked_line: None,
            recent_cells: Vec::new(),
        }
    }
}

fn strictly_monotone(v: [usize; 3]) -> bool {
    (v[0] < v[1] && v[1] < v[2]) || (v[0] > v[1] && v[1] > v[2])
}

fn collinear(cells: &[GridCell]) -> Option<(LockDirection, usize)> {
    let [a, b, c] = <[GridCell; 3]>::try_from(cells).ok()?;
    if a.row == b.row && b.row == c.row && strictly_monotone([a.col, b.col, c.col]) {
        return Some((LockDirection::Horizontal, a.row));
    }
    if a.col == b.col && b.col == c.col && strictly_monotone([a.row, b.row, c.row]) {
        return Some((LockDirection::Vertical, a.col));
    }
    None
}

/// Advances the directional lock with the cell under the finger.
///
/// Three consecutive distinct cells in one row (or column), stepping in one
/// direction, lock that row. Leaving a locked row upward plays the step-up
/// tone and downward the step-down tone; for a locked column, right is up
/// and left is down.
pub fn lock_update(lock: &LockState, cell: GridCell) -> (Option<StepTone>, LockState) {
    if lock.recent_cells.last() == Some(&cell) {
        return (None, lock.clone());
    }
    let mut next = lock.clone();
    if lock.phase == LockPhase::Locked {
        let line = lock.locked_line.unwrap_or(0) as i64;
        let offset = match lock.direction {
            Some(LockDirection::Vertical) => line - cell.col as i64,
            _ => cell.row as i64 - line,
        };
        if offset == 0 {
            next.recent_cells.push(cell);
            let excess = next.recent_cells.len().saturating_sub(3);
            next.recent_cells.drain(..excess);
            return (None, next);
        }
        let tone = if offset < 0 { StepTone::Up } else { StepTone::Down };
        next.phase = LockPhase::Armed;
        next.recent_cells = vec![cell];
        return (Some(tone), next);
    }

    next.recent_cells.push(cell);
    let excess = next.recent_cells.len().saturating_sub(3);
    next.recent_cells.drain(..excess);
    if let Some((direction, line)) = collinear(&next.recent_cells) {
        next.phase = LockPhase::Locked;
        next.direction = Some(direction);
        next.locked_line = Some(line);
    }
    (None, next)
}

/// Two-note cue for leaving a locked line.
pub fn step_tones(cfg: &DtmConfig, step: StepTone) -> Vec<ToneSpec> {
    let note = |pitch_hz| ToneSpec {
        pitch_hz,
        duration_ms: cfg.step_note_ms,
        timbre: Timbre::Default,
        gap_after_ms: 0.0,
    };
    match step {
        StepTone::Up => vec![note(cfg.step_low_hz), note(cfg.step_high_hz)],
        StepTone::Down => vec![note(cfg.step_high_hz), note(cfg.step_low_hz)],
    }
}

/// Lock grid cell for a data position: columns follow the x bin edges and
/// rows the y cell edges, counted from the top.
pub fn lock_cell(x_edges: &[f64], y_edges: &[f64], x: f64, y: f64) -> GridCell {
    let rows = y_edges.len() - 1;
    GridCell {
        col: interval_index(x_edges, x),
        row: rows - 1 - interval_index(y_edges, y),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThrottleState {
    pub last_emit_time: Option<u64>,
    pub min_interval: u64,
}

impl ThrottleState {
    pub fn new(min_interval: u64) -> Self {
        Self {
            last_emit_time: None,
            min_interval,
        }
    }
}

/// Allows an emission only `min_interval` ms after the previous one.
/// Suppressed emissions are dropped.
pub fn throttle_gate(t: &ThrottleState, now: u64) -> (bool, ThrottleState) {
    let allowed = match t.last_emit_time {
        None => true,
        Some(last) => now >= last && now - last >= t.min_interval,
    };
    let mut next = *t;
    if allowed {
        next.last_emit_time = Some(now);
    }
    (allowed, next)
}

fn zoom_axis(lo: f64, hi: f64, frac: f64, scale: f64, full_lo: f64, full_hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let full_span = full_hi - full_lo;
    let anchor = lo + frac * span;
    let new_span = (span / scale).max(full_span * 1e-9);
    if new_span >= full_span {
        return (full_lo, full_hi);
    }
    let mut new_lo = anchor - frac * new_span;
    let mut new_hi = new_lo + new_span;
    if new_lo < full_lo {
        new_lo = full_lo;
        new_hi = full_lo + new_span;
    }
    if new_hi > full_hi {
        new_hi = full_hi;
        new_lo = full_hi - new_span;
    }
    (new_lo, new_hi)
}

/// Zooms `vp` by `scale` around the screen point `focus`, keeping the data
/// coordinate under `focus` fixed and staying within `full`.
pub fn apply_pinch(vp: &Viewport, scale: f64, focus: ScreenPoint, screen: ScreenSize, full: &Viewport) -> Viewport {
    if !(scale.is_finite() && scale > 0.0) || scale == 1.0 {
        return *vp;
    }
    let fx = (focus.x / f64::from(screen.width)).clamp(0.0, 1.0);
    let fy = 1.0 - (focus.y / f64::from(screen.height)).clamp(0.0, 1.0);
    let (x_lo, x_hi) = zoom_axis(vp.x_lo, vp.x_hi, fx, scale, full.x_lo, full.x_hi);
    let (y_lo, y_hi) = zoom_axis(vp.y_lo, vp.y_hi, fy, scale, full.y_lo, full.y_hi);
    Viewport::new(x_lo, x_hi, y_lo, y_hi)
}

/// What the finger sees in direct touch mode.
#[derive(Debug, Clone, Copy)]
pub struct DtmView<'a> {
    pub model: &'a ChartModel,
    pub viewport: &'a Viewport,
    pub screen: ScreenSize,
    /// Series currently explorable (active and not filtered out).
    pub series: &'a [usize],
    pub dtm: &'a DtmConfig,
    pub sonification: &'a SonificationConfig,
}

impl DtmView<'_> {
    fn series_sorted(&self, series: usize) -> Vec<(usize, ScreenPoint)> {
        let mut pts: Vec<(usize, f64, f64)> = self
            .model
            .series_points(series)
            .map(|(id, p)| (id, p.x, p.y))
            .collect();
        pts.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        pts.into_iter()
            .map(|(id, x, y)| {
                (
                    id,
                    data_to_screen(crate::geometry::DataPos::new(x, y), self.viewport, self.screen),
                )
            })
            .collect()
    }

    /// Nearest point of the explorable series by x; ties go to the smaller x.
    pub fn nearest_by_x(&self, x: f64) -> Option<usize> {
        self.model
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| self.series.contains(&p.series_index))
            .min_by(|(ia, a), (ib, b)| {
                (a.x - x)
                    .abs()
                    .total_cmp(&(b.x - x).abs())
                    .then(a.x.total_cmp(&b.x))
                    .then(ia.cmp(ib))
            })
            .map(|(id, _)| id)
    }

    fn bar_half_width(&self) -> f64 {
        let mut xs: Vec<f64> = self.model.points.iter().map(|p| p.x).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let gap = xs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        0.4 * if gap.is_finite() { gap } else { 1.0 }
    }

    /// Screen distance from `pos` to the nearest drawn line segment or bar.
    pub fn contact_distance(&self, pos: ScreenPoint) -> f64 {
        let mut best = f64::INFINITY;
        for &s in self.series {
            let pts = self.series_sorted(s);
            match self.model.kind() {
                ChartKind::Line | ChartKind::Scatter => {
                    if let [(_, only)] = pts.as_slice() {
                        best = best.min(pos.distance(*only));
                    }
                    for w in pts.windows(2) {
                        best = best.min(distance_to_segment(pos, w[0].1, w[1].1));
                    }
                }
                ChartKind::Bar => {
                    let half = self.bar_half_width();
                    let base = 0f64.clamp(self.viewport.y_lo, self.viewport.y_hi);
                    for (id, _) in pts {
                        let p = &self.model.points[id];
                        let a = data_to_screen(
                            crate::geometry::DataPos::new(p.x - half, base),
                            self.viewport,
                            self.screen,
                        );
                        let b = data_to_screen(
                            crate::geometry::DataPos::new(p.x + half, p.y),
                            self.viewport,
                            self.screen,
                        );
                        best = best.min(distance_to_box(pos, a, b));
                    }
                }
            }
        }
        best
    }

    /// Explorable points inside the viewport, in screen space.
    pub fn visible_points(&self) -> Vec<(usize, ScreenPoint)> {
        self.model
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| self.series.contains(&p.series_index))
            .filter(|(_, p)| self.viewport.contains(crate::geometry::DataPos::new(p.x, p.y)))
            .map(|(id, p)| {
                (
                    id,
                    data_to_screen(crate::geometry::DataPos::new(p.x, p.y), self.viewport, self.screen),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub point_id: usize,
    pub tone: ToneSpec,
    /// The finger is touching a drawn line or bar.
    pub contact: bool,
}

/// Slider-style lookup: the finger's x picks the nearest data point, whose
/// value is played as a tone. Contact with a drawn element adds a haptic.
pub fn project(view: &DtmView<'_>, pos: ScreenPoint) -> Option<Projection> {
    let data = screen_to_data(pos, view.viewport, view.screen);
    let point_id = view.nearest_by_x(data.x)?;
    let p = &view.model.points[point_id];
    Some(Projection {
        point_id,
        tone: value_tone(view.sonification, p.y, view.model.y_range),
        contact: view.contact_distance(pos) <= view.dtm.hit_tolerance_px,
    })
}

/// [`project`] behind the throttle gate.
pub fn project_to_x(
    view: &DtmView<'_>,
    throttle: &ThrottleState,
    pos: ScreenPoint,
    now: u64,
) -> (Option<Projection>, ThrottleState) {
    let (allowed, next) = throttle_gate(throttle, now);
    if !allowed {
        return (None, *throttle);
    }
    match project(view, pos) {
        Some(p) => (Some(p), next),
        None => (None, *throttle),
    }
}

/// Position details under the finger, or the axis reading when the finger
/// rests on an axis strip.
pub fn split_tap_info(view: &DtmView<'_>, pos: ScreenPoint, series_label: &str) -> String {
    let data = screen_to_data(pos, view.viewport, view.screen);
    let strip = view.dtm.axis_strip_px;
    let model = view.model;
    if pos.y >= f64::from(view.screen.height) - strip {
        return format!("X axis, {}, {}", model.spec.x_label, model.format_x(data.x));
    }
    if pos.x <= strip {
        return format!("Y axis, {}, {}", model.spec.y_label, model.format_y(data.y));
    }
    format!(
        "{}, {}, {}",
        model.format_x(data.x),
        model.format_y(data.y),
        series_label
    )
}
