//! Navigation hierarchy: overview, four zones, bins, per-series subtrees,
//! cells and points, plus the full-coverage page layouts for each level.

use serde::{Deserialize, Serialize};

use crate::config::GridConfig;
use crate::error::LayoutError;
use crate::geometry::{Range, Rect, ScreenPoint, ScreenSize};
use crate::model::{ChartKind, ChartModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Overview,
    Zone,
    Bin,
    SeriesInBin,
    Cell,
    Point,
    FilterToggle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneKind {
    XAxis,
    YAxis,
    DataPoints,
    Filters,
}

impl ZoneKind {
    pub const ALL: [ZoneKind; 4] = [
        ZoneKind::XAxis,
        ZoneKind::YAxis,
        ZoneKind::DataPoints,
        ZoneKind::Filters,
    ];
}

/// Which data axis a bin slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodePayload {
    Overview,
    Zone(ZoneKind),
    Bin {
        axis: Axis,
        index: usize,
        interval: Range,
        point_ids: Vec<usize>,
        series_counts: Vec<usize>,
    },
    SeriesInBin {
        series: usize,
        point_ids: Vec<usize>,
    },
    /// `index` counts from the bottom (x bins) or from the left (y bins).
    Cell {
        index: usize,
        x_interval: Range,
        y_interval: Range,
        point_ids: Vec<usize>,
    },
    Point {
        point_id: usize,
    },
    FilterToggle {
        series: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemanticNode {
    pub id: NodeId,
    pub level: Level,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub payload: NodePayload,
}

/// How a navigation level is arranged on screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutAxis {
    /// Columns, left to right.
    Horizontal,
    /// Rows, bottom to top.
    Vertical,
    /// Fixed 2x2 grid: bottom-left, top-left, top-right, bottom-right.
    Quadrants,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageLayout {
    pub page_index: usize,
    pub page_count: usize,
    pub per_page: usize,
    pub regions: Vec<(NodeId, Rect)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemanticTree {
    nodes: Vec<SemanticNode>,
    grid: GridConfig,
    zones: [NodeId; 4],
    x_edges: Vec<f64>,
    y_edges: Vec<f64>,
    /// Largest single-series cell count, indexed by `Axis as usize`.
    max_cell_count: [usize; 2],
    /// Largest single-series count within one bin, indexed by `Axis as usize`.
    max_series_bin_count: [usize; 2],
}

/// `n + 1` equally spaced edges over `range`; the last edge is exactly `range.hi`.
pub fn equal_edges(range: Range, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == n {
                range.hi
            } else {
                range.lo + range.span() * (k as f64) / (n as f64)
            }
        })
        .collect()
}

/// Index of the half-open interval `[e_k, e_{k+1})` holding `v`; the last
/// interval is closed. Values outside the edges clamp to the end intervals.
pub fn interval_index(edges: &[f64], v: f64) -> usize {
    let n = edges.len() - 1;
    let k = edges.partition_point(|&e| e <= v);
    k.saturating_sub(1).min(n - 1)
}

struct Builder {
    nodes: Vec<SemanticNode>,
}

impl Builder {
    fn push(&mut self, level: Level, parent: Option<NodeId>, payload: NodePayload) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(SemanticNode {
            id,
            level,
            parent,
            children: Vec::new(),
            payload,
        });
        if let Some(p) = parent {
            self.nodes[p.index()].children.push(id);
        }
        id
    }
}

impl SemanticTree {
    /// Builds the full hierarchy for `model` using `grid`.
    pub fn build(model: &ChartModel, grid: GridConfig) -> SemanticTree {
        let grid = GridConfig {
            x_bins: grid.x_bins.max(1),
            y_cells_per_bin: grid.y_cells_per_bin.max(1),
        };
        let mut b = Builder { nodes: Vec::new() };
        let root = b.push(Level::Overview, None, NodePayload::Overview);
        let zones = ZoneKind::ALL.map(|z| b.push(Level::Zone, Some(root), NodePayload::Zone(z)));

        let x_edges = equal_edges(model.x_range, grid.x_bins);
        let y_edges = equal_edges(model.y_range, grid.y_cells_per_bin);
        let mut max_cell_count = [0usize; 2];
        let mut max_series_bin_count = [0usize; 2];

        for axis in [Axis::X, Axis::Y] {
            let (zone, along, across) = match axis {
                Axis::X => (zones[0], &x_edges, &y_edges),
                Axis::Y => (zones[1], &y_edges, &x_edges),
            };
            let coord = |id: usize| match axis {
                Axis::X => model.points[id].x,
                Axis::Y => model.points[id].y,
            };
            let cross = |id: usize| match axis {
                Axis::X => model.points[id].y,
                Axis::Y => model.points[id].x,
            };
            let bin_count = along.len() - 1;
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); bin_count];
            for id in 0..model.points.len() {
                members[interval_index(along, coord(id))].push(id);
            }
            for (index, mut ids) in members.into_iter().enumerate() {
                let interval = Range::new(along[index], along[index + 1]);
                let mut series_counts = vec![0usize; model.series_count()];
                for &id in &ids {
                    series_counts[model.points[id].series_index] += 1;
                }
                let top = series_counts.iter().copied().max().unwrap_or(0);
                max_series_bin_count[axis as usize] = max_series_bin_count[axis as usize].max(top);
                // Points in a bin are ordered along the bin's axis.
                ids.sort_by(|&a, &c| {
                    coord(a)
                        .total_cmp(&coord(c))
                        .then(cross(a).total_cmp(&cross(c)))
                        .then(model.points[a].series_index.cmp(&model.points[c].series_index))
                        .then(a.cmp(&c))
                });
                let bin = b.push(
                    Level::Bin,
                    Some(zone),
                    NodePayload::Bin {
                        axis,
                        index,
                        interval,
                        point_ids: ids.clone(),
                        series_counts,
                    },
                );
                match model.kind() {
                    ChartKind::Scatter => {
                        for series in 0..model.series_count() {
                            let series_ids: Vec<usize> = ids
                                .iter()
                                .copied()
                                .filter(|&id| model.points[id].series_index == series)
                                .collect();
                            let sub = b.push(
                                Level::SeriesInBin,
                                Some(bin),
                                NodePayload::SeriesInBin {
                                    series,
                                    point_ids: series_ids.clone(),
                                },
                            );
                            let cells = across.len() - 1;
                            let mut cell_members: Vec<Vec<usize>> = vec![Vec::new(); cells];
                            for &id in &series_ids {
                                cell_members[interval_index(across, cross(id))].push(id);
                            }
                            for (ci, cell_ids) in cell_members.into_iter().enumerate() {
                                let cross_iv = Range::new(across[ci], across[ci + 1]);
                                let (x_interval, y_interval) = match axis {
                                    Axis::X => (interval, cross_iv),
                                    Axis::Y => (cross_iv, interval),
                                };
                                max_cell_count[axis as usize] =
                                    max_cell_count[axis as usize].max(cell_ids.len());
                                b.push(
                                    Level::Cell,
                                    Some(sub),
                                    NodePayload::Cell {
                                        index: ci,
                                        x_interval,
                                        y_interval,
                                        point_ids: cell_ids,
                                    },
                                );
                            }
                        }
                    }
                    ChartKind::Line | ChartKind::Bar => {
                        for id in ids {
                            b.push(Level::Point, Some(bin), NodePayload::Point { point_id: id });
                        }
                    }
                }
            }
        }

        let mut all: Vec<usize> = (0..model.points.len()).collect();
        all.sort_by(|&a, &c| {
            let (p, q) = (&model.points[a], &model.points[c]);
            p.x.total_cmp(&q.x)
                .then(p.y.total_cmp(&q.y))
                .then(p.series_index.cmp(&q.series_index))
                .then(a.cmp(&c))
        });
        for id in all {
            b.push(Level::Point, Some(zones[2]), NodePayload::Point { point_id: id });
        }
        for series in 0..model.series_count() {
            b.push(
                Level::FilterToggle,
                Some(zones[3]),
                NodePayload::FilterToggle { series },
            );
        }

        SemanticTree {
            nodes: b.nodes,
            grid,
            zones,
            x_edges,
            y_edges,
            max_cell_count,
            max_series_bin_count,
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn grid(&self) -> GridConfig {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &SemanticNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[SemanticNode] {
        &self.nodes
    }

    pub fn zone(&self, kind: ZoneKind) -> NodeId {
        self.zones[ZoneKind::ALL.iter().position(|z| *z == kind).unwrap_or(0)]
    }

    pub fn max_cell_count(&self, axis: Axis) -> usize {
        self.max_cell_count[axis as usize]
    }

    pub fn max_series_bin_count(&self, axis: Axis) -> usize {
        self.max_series_bin_count[axis as usize]
    }

    pub fn edges(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.x_edges,
            Axis::Y => &self.y_edges,
        }
    }

    /// The ordered list of nodes navigable alongside `id`.
    pub fn siblings(&self, id: NodeId) -> &[NodeId] {
        match self.node(id).parent {
            Some(p) => &self.node(p).children,
            None => std::slice::from_ref(&self.nodes[0].id),
        }
    }

    pub fn sibling_index(&self, id: NodeId) -> usize {
        self.siblings(id).iter().position(|&n| n == id).unwrap_or(0)
    }

    /// Layout direction for the level that `id` belongs to.
    pub fn layout_axis(&self, id: NodeId) -> LayoutAxis {
        let node = self.node(id);
        match (&node.payload, node.parent.map(|p| &self.node(p).payload)) {
            (NodePayload::Zone(_), _) => LayoutAxis::Quadrants,
            (NodePayload::Bin { axis: Axis::Y, .. }, _) => LayoutAxis::Vertical,
            (NodePayload::Cell { .. }, Some(NodePayload::SeriesInBin { .. })) => {
                match self.bin_axis_of(id) {
                    Some(Axis::Y) => LayoutAxis::Horizontal,
                    _ => LayoutAxis::Vertical,
                }
            }
            (NodePayload::Point { .. }, Some(NodePayload::Bin { axis: Axis::Y, .. })) => {
                LayoutAxis::Vertical
            }
            _ => LayoutAxis::Horizontal,
        }
    }

    /// The axis of the nearest bin at or above `id`.
    pub fn bin_axis_of(&self, id: NodeId) -> Option<Axis> {
        self.enclosing_bin(id).and_then(|b| match self.node(b).payload {
            NodePayload::Bin { axis, .. } => Some(axis),
            _ => None,
        })
    }

    /// The nearest bin at or above `id`.
    pub fn enclosing_bin(&self, id: NodeId) -> Option<NodeId> {
        let mut cur = Some(id);
        while let Some(n) = cur {
            if self.node(n).level == Level::Bin {
                return Some(n);
            }
            cur = self.node(n).parent;
        }
        None
    }

    /// The bin of the given axis whose interval holds `v`.
    pub fn bin_containing(&self, axis: Axis, v: f64) -> NodeId {
        let zone = match axis {
            Axis::X => self.zones[0],
            Axis::Y => self.zones[1],
        };
        self.node(zone).children[interval_index(self.edges(axis), v)]
    }

    /// Lays out the page of the level `id` belongs to that contains `id`.
    pub fn layout_for(&self, id: NodeId, screen: ScreenSize, min_touch_px: u32) -> PageLayout {
        let siblings = self.siblings(id);
        let axis = self.layout_axis(id);
        let per_page = per_page(axis, screen, min_touch_px);
        let page = self.sibling_index(id) / per_page;
        layout_page(siblings, axis, screen, page, min_touch_px).expect("page of an existing node")
    }
}

/// Nodes that fit on one page along `axis`.
pub fn per_page(axis: LayoutAxis, screen: ScreenSize, min_touch_px: u32) -> usize {
    let min = min_touch_px.max(1);
    match axis {
        LayoutAxis::Horizontal => ((screen.width / min) as usize).max(1),
        LayoutAxis::Vertical => ((screen.height / min) as usize).max(1),
        LayoutAxis::Quadrants => 4,
    }
}

pub fn page_count(len: usize, per_page: usize) -> usize {
    len.div_ceil(per_page).max(1)
}

fn split(extent: u32, i: usize, n: usize) -> u32 {
    ((u64::from(extent) * i as u64) / n as u64) as u32
}

/// Lays out one page of a navigation level so its regions tile the screen.
pub fn layout_page(
    nodes: &[NodeId],
    axis: LayoutAxis,
    screen: ScreenSize,
    page_index: usize,
    min_touch_px: u32,
) -> Result<PageLayout, LayoutError> {
    if nodes.is_empty() {
        return Err(LayoutError::NoNodes);
    }
    let per_page = per_page(axis, screen, min_touch_px);
    let page_count = page_count(nodes.len(), per_page);
    if page_index >= page_count {
        return Err(LayoutError::PageOutOfRange {
            page: page_index,
            page_count,
        });
    }
    let start = page_index * per_page;
    let page: &[NodeId] = &nodes[start..(start + per_page).min(nodes.len())];
    let n = page.len();
    let (w, h) = (screen.width, screen.height);

    let regions = match axis {
        LayoutAxis::Horizontal => page
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, Rect::new(split(w, i, n), 0, split(w, i + 1, n), h)))
            .collect(),
        LayoutAxis::Vertical => page
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, Rect::new(0, h - split(h, i + 1, n), w, h - split(h, i, n))))
            .collect(),
        LayoutAxis::Quadrants => {
            let (mx, my) = (w / 2, h / 2);
            let slots = [
                Rect::new(0, my, mx, h),
                Rect::new(0, 0, mx, my),
                Rect::new(mx, 0, w, my),
                Rect::new(mx, my, w, h),
            ];
            match n {
                1 => vec![(page[0], Rect::new(0, 0, w, h))],
                2 => vec![
                    (page[0], Rect::new(0, 0, mx, h)),
                    (page[1], Rect::new(mx, 0, w, h)),
                ],
                3 => vec![
                    (page[0], slots[0]),
                    (page[1], slots[1]),
                    (page[2], Rect::new(mx, 0, w, h)),
                ],
                _ => page.iter().copied().zip(slots).collect(),
            }
        }
    };
    Ok(PageLayout {
        page_index,
        page_count,
        per_page,
        regions,
    })
}

/// The node whose region holds `q`.
pub fn hit_test(layout: &PageLayout, q: ScreenPoint, screen: ScreenSize) -> Result<NodeId, LayoutError> {
    if !screen.contains(q) {
        return Err(LayoutError::OutsideScreen {
            x: q.x,
            y: q.y,
            width: screen.width,
            height: screen.height,
        });
    }
    layout
        .regions
        .iter()
        .find(|(_, r)| r.claims(q, screen))
        .map(|(id, _)| *id)
        .ok_or(LayoutError::OutsideScreen {
            x: q.x,
            y: q.y,
            width: screen.width,
            height: screen.height,
        })
}
