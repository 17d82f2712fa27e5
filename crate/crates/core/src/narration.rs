//! Speech strings for every node kind.
//!
//! Point labels adapt to how the user arrived: a jump to a new position
//! leads with the X value, a step to a neighbouring item leads with Y.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{format_number, ChartModel, XKind};
use crate::tree::{Axis, NodeId, NodePayload, SemanticTree, ZoneKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    NewPosition,
    Adjacent,
    Repeat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NavContext {
    pub move_kind: MoveKind,
    pub previous_node: Option<NodeId>,
}

impl NavContext {
    pub fn new_position(previous_node: Option<NodeId>) -> Self {
        Self {
            move_kind: MoveKind::NewPosition,
            previous_node,
        }
    }

    pub fn adjacent(previous_node: NodeId) -> Self {
        Self {
            move_kind: MoveKind::Adjacent,
            previous_node: Some(previous_node),
        }
    }

    pub fn repeat(node: NodeId) -> Self {
        Self {
            move_kind: MoveKind::Repeat,
            previous_node: Some(node),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityTier {
    Empty,
    VerySparse,
    Sparse,
    Moderate,
    Dense,
    VeryDense,
}

impl DensityTier {
    pub fn from_fraction(f: f64) -> Self {
        if f <= 0.0 {
            DensityTier::Empty
        } else if f <= 0.05 {
            DensityTier::VerySparse
        } else if f <= 0.15 {
            DensityTier::Sparse
        } else if f <= 0.30 {
            DensityTier::Moderate
        } else if f <= 0.50 {
            DensityTier::Dense
        } else {
            DensityTier::VeryDense
        }
    }

    pub fn phrase(self) -> &'static str {
        match self {
            DensityTier::Empty => "no data points",
            DensityTier::VerySparse => "very sparsely distributed",
            DensityTier::Sparse => "sparsely distributed",
            DensityTier::Moderate => "moderately distributed",
            DensityTier::Dense => "densely distributed",
            DensityTier::VeryDense => "very densely distributed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityLabel {
    pub tier: DensityTier,
    pub fraction: f64,
}

impl DensityLabel {
    pub fn new(count: usize, reference: usize) -> Self {
        let fraction = if reference == 0 {
            0.0
        } else {
            (count as f64 / reference as f64).clamp(0.0, 1.0)
        };
        Self {
            tier: DensityTier::from_fraction(fraction),
            fraction,
        }
    }
}

/// Last label spoken for each node, so "repeat" says exactly the same thing.
pub type RepeatCache = BTreeMap<NodeId, String>;

/// Suffix naming hidden series, empty when every series is shown.
pub fn filter_note(model: &ChartModel, visible: &[bool]) -> String {
    let hidden: Vec<&str> = visible
        .iter()
        .enumerate()
        .filter(|(_, v)| !**v)
        .map(|(i, _)| model.series_name(i))
        .collect();
    if hidden.is_empty() {
        String::new()
    } else {
        format!(", {} hidden", hidden.join(" and "))
    }
}

/// Label for one data point.
pub fn narrate_point(
    model: &ChartModel,
    point_id: usize,
    node: NodeId,
    ctx: NavContext,
    cache: &RepeatCache,
    visible: &[bool],
) -> String {
    if ctx.move_kind == MoveKind::Repeat {
        if let Some(last) = cache.get(&node) {
            return last.clone();
        }
    }
    let p = &model.points[point_id];
    let x = model.format_x(p.x);
    let y = model.format_y(p.y);
    let series = model.series_name(p.series_index);
    let note = filter_note(model, visible);
    match ctx.move_kind {
        MoveKind::Adjacent => format!("{y}, {x}, {series}{note}"),
        MoveKind::NewPosition | MoveKind::Repeat => format!("{x}, {y}, {series}{note}"),
    }
}

/// Speakable form of a bin interval on `axis`.
pub fn interval_text(model: &ChartModel, axis: Axis, lo: f64, hi: f64) -> String {
    match (axis, model.spec.x_kind) {
        (Axis::X, XKind::Categorical) if !model.categories.is_empty() => {
            let first = lo.ceil().max(0.0) as usize;
            let labels: Vec<&str> = (first..model.categories.len())
                .take_while(|&i| (i as f64) < hi)
                .map(|i| model.categories[i].as_str())
                .collect();
            match labels.as_slice() {
                [] => format!("between {} and {}", model.format_x(lo), model.format_x(hi)),
                [one] => one.to_string(),
                [a, .., b] => format!("{a} to {b}"),
            }
        }
        (Axis::X, _) => format!("{} to {}", model.format_x(lo), model.format_x(hi)),
        (Axis::Y, _) => format!("{} to {}", format_number(lo), format_number(hi)),
    }
}

/// "<interval>: <P>% of data points, <density phrase>"
pub fn describe_bin(
    model: &ChartModel,
    axis: Axis,
    lo: f64,
    hi: f64,
    bin_count: usize,
    total_points: usize,
) -> String {
    let label = DensityLabel::new(bin_count, total_points);
    let pct = if total_points == 0 {
        0
    } else {
        (100.0 * bin_count as f64 / total_points as f64).round() as u64
    };
    format!(
        "{}: {}% of data points, {}",
        interval_text(model, axis, lo, hi),
        pct,
        label.tier.phrase()
    )
}

/// Series level inside a scatter bin.
pub fn describe_series_in_bin(model: &ChartModel, series: usize, count: usize, bin_total: usize) -> String {
    let label = DensityLabel::new(count, bin_total);
    if count == 0 {
        return format!("{}, no data points", model.series_name(series));
    }
    format!(
        "{}, {} of {} points in this bin, {}",
        model.series_name(series),
        count,
        bin_total,
        label.tier.phrase()
    )
}

/// "<n> points, <density phrase>" relative to the fullest cell.
pub fn describe_cell(count: usize, max_cell_count: usize) -> String {
    if count == 0 {
        return DensityTier::Empty.phrase().to_string();
    }
    let label = DensityLabel::new(count, max_cell_count.max(count));
    let noun = if count == 1 { "point" } else { "points" };
    format!("{count} {noun}, {}", label.tier.phrase())
}

pub fn narrate_zone(kind: ZoneKind) -> &'static str {
    match kind {
        ZoneKind::XAxis => "X axis area",
        ZoneKind::YAxis => "Y axis area",
        ZoneKind::DataPoints => "Data points area",
        ZoneKind::Filters => "Filters area",
    }
}

/// Chart title, axes with their extents, and the series list.
pub fn narrate_overview(model: &ChartModel) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &model.points {
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        y_min = y_min.min(p.y);
        y_max = y_max.max(p.y);
    }
    let n = model.series_count();
    format!(
        "{}, {} chart. X axis: {}, from {} to {}. Y axis: {}, from {} to {}. {} series: {}.",
        model.spec.title,
        model.kind().name(),
        model.spec.x_label,
        model.format_x(x_min),
        model.format_x(x_max),
        model.spec.y_label,
        format_number(y_min),
        format_number(y_max),
        n,
        model.spec.series_names.join(", ")
    )
}

pub fn narrate_filter_toggle(model: &ChartModel, series: usize, visible: bool) -> String {
    format!(
        "{}, {}",
        model.series_name(series),
        if visible { "shown" } else { "hidden" }
    )
}

/// Series counted in bin narration: the active one (if any) among the visible.
pub fn counted_series(active: Option<usize>, visible: &[bool]) -> Vec<usize> {
    (0..visible.len())
        .filter(|&s| visible[s] && active.is_none_or(|a| a == s))
        .collect()
}

/// Speech for any node under the current filters and series selection.
pub fn describe_node(
    model: &ChartModel,
    tree: &SemanticTree,
    node: NodeId,
    ctx: NavContext,
    cache: &RepeatCache,
    visible: &[bool],
    active_series: Option<usize>,
) -> String {
    if ctx.move_kind == MoveKind::Repeat {
        if let Some(last) = cache.get(&node) {
            return last.clone();
        }
    }
    match &tree.node(node).payload {
        NodePayload::Overview => narrate_overview(model),
        NodePayload::Zone(kind) => narrate_zone(*kind).to_string(),
        NodePayload::Bin {
            axis,
            interval,
            series_counts,
            ..
        } => {
            let count = counted_series(active_series, visible)
                .iter()
                .map(|&s| series_counts[s])
                .sum();
            let mut text = describe_bin(
                model,
                *axis,
                interval.lo,
                interval.hi,
                count,
                model.points.len(),
            );
            if let Some(s) = active_series {
                text = format!("{text}, {}", model.series_name(s));
            }
            text + &filter_note(model, visible)
        }
        NodePayload::SeriesInBin { series, point_ids } => {
            let bin_total = tree
                .node(node)
                .parent
                .map(|b| match &tree.node(b).payload {
                    NodePayload::Bin { point_ids, .. } => point_ids.len(),
                    _ => 0,
                })
                .unwrap_or(0);
            let mut text = describe_series_in_bin(model, *series, point_ids.len(), bin_total);
            if !visible[*series] {
                text.push_str(", hidden");
            }
            text
        }
        NodePayload::Cell { point_ids, .. } => {
            let axis = tree.bin_axis_of(node).unwrap_or(Axis::X);
            describe_cell(point_ids.len(), tree.max_cell_count(axis))
        }
        NodePayload::Point { point_id } => {
            narrate_point(model, *point_id, node, ctx, cache, visible)
        }
        NodePayload::FilterToggle { series } => {
            narrate_filter_toggle(model, *series, visible[*series])
        }
    }
}
