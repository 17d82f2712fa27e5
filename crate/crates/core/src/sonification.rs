//! Data-to-tone mappings. The engine only describes tones; synthesis is the
//! client's job.

use serde::{Deserialize, Serialize};

use crate::config::SonificationConfig;
use crate::geometry::Range;
use crate::model::{ChartKind, ChartModel};
use crate::tree::{NodeId, NodePayload, SemanticTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "series")]
pub enum Timbre {
    Default,
    Series(usize),
    Numb,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToneSpec {
    pub pitch_hz: f64,
    pub duration_ms: f64,
    pub timbre: Timbre,
    pub gap_after_ms: f64,
}

impl ToneSpec {
    pub fn is_numb(&self) -> bool {
        self.timbre == Timbre::Numb
    }
}

/// Exponential pitch interpolation: equal value steps give equal musical
/// intervals. `v` is clamped into `range`.
pub fn pitch_for_value(cfg: &SonificationConfig, v: f64, range: Range) -> f64 {
    if range.hi <= range.lo {
        return cfg.pitch_hi_hz;
    }
    let v = v.clamp(range.lo, range.hi);
    if v == range.lo {
        return cfg.pitch_lo_hz;
    }
    if v == range.hi {
        return cfg.pitch_hi_hz;
    }
    let t = (v - range.lo) / range.span();
    cfg.pitch_lo_hz * (cfg.pitch_hi_hz / cfg.pitch_lo_hz).powf(t)
}

pub fn numb_tone(cfg: &SonificationConfig) -> ToneSpec {
    ToneSpec {
        pitch_hz: cfg.numb_pitch_hz,
        duration_ms: cfg.numb_ms,
        timbre: Timbre::Numb,
        gap_after_ms: 0.0,
    }
}

/// Single tone for one value, used for line/bar points and DTM projection.
pub fn value_tone(cfg: &SonificationConfig, v: f64, range: Range) -> ToneSpec {
    ToneSpec {
        pitch_hz: pitch_for_value(cfg, v, range),
        duration_ms: cfg.tone_ms,
        timbre: Timbre::Default,
        gap_after_ms: 0.0,
    }
}

/// Density tone for a cell holding `count` of at most `max_count` points.
/// Empty cells are numb; otherwise pitch and duration both rise with count.
pub fn tone_for_cell(cfg: &SonificationConfig, count: usize, max_count: usize, series: usize) -> ToneSpec {
    if count == 0 {
        return numb_tone(cfg);
    }
    let max_count = max_count.max(count).max(1);
    let fraction = count as f64 / max_count as f64;
    ToneSpec {
        pitch_hz: pitch_for_value(cfg, count as f64, Range::new(1.0, max_count as f64)),
        duration_ms: cfg.dur_lo_ms + (cfg.dur_hi_ms - cfg.dur_lo_ms) * fraction,
        timbre: Timbre::Series(series),
        gap_after_ms: 0.0,
    }
}

fn with_gaps(cfg: &SonificationConfig, mut tones: Vec<ToneSpec>) -> Vec<ToneSpec> {
    for t in &mut tones {
        t.gap_after_ms = cfg.gap_ms;
    }
    tones
}

/// One tone per cell of `series` within `bin`, bottom (or left) cell first.
/// Returns `None` when `bin` is not a scatter bin.
pub fn bin_tone_sequence(
    cfg: &SonificationConfig,
    tree: &SemanticTree,
    bin: NodeId,
    series: usize,
) -> Option<Vec<ToneSpec>> {
    let axis = match tree.node(bin).payload {
        NodePayload::Bin { axis, .. } => axis,
        _ => return None,
    };
    let sub = tree.node(bin).children.iter().copied().find(|&c| {
        matches!(tree.node(c).payload, NodePayload::SeriesInBin { series: s, .. } if s == series)
    })?;
    Some(series_cell_sequence(cfg, tree, sub, tree.max_cell_count(axis)))
}

/// Tones for the cells under a series-in-bin node.
pub fn series_cell_sequence(
    cfg: &SonificationConfig,
    tree: &SemanticTree,
    series_node: NodeId,
    max_count: usize,
) -> Vec<ToneSpec> {
    let series = match tree.node(series_node).payload {
        NodePayload::SeriesInBin { series, .. } => series,
        _ => 0,
    };
    let tones = tree
        .node(series_node)
        .children
        .iter()
        .map(|&c| match &tree.node(c).payload {
            NodePayload::Cell { point_ids, .. } => {
                tone_for_cell(cfg, point_ids.len(), max_count, series)
            }
            _ => numb_tone(cfg),
        })
        .collect();
    with_gaps(cfg, tones)
}

/// Aggregate tone for a whole series: mean value in pitch for line/bar,
/// share of all points in pitch and duration for scatter.
pub fn series_overview_tone(cfg: &SonificationConfig, series: usize, model: &ChartModel) -> ToneSpec {
    let (count, sum) = model
        .series_points(series)
        .fold((0usize, 0.0f64), |(n, s), (_, p)| (n + 1, s + p.y));
    match model.kind() {
        ChartKind::Line | ChartKind::Bar => {
            if count == 0 {
                return numb_tone(cfg);
            }
            value_tone(cfg, sum / count as f64, model.y_range)
        }
        ChartKind::Scatter => {
            if count == 0 {
                return numb_tone(cfg);
            }
            let fraction = count as f64 / model.points.len() as f64;
            ToneSpec {
                pitch_hz: pitch_for_value(cfg, fraction, Range::new(0.0, 1.0)),
                duration_ms: cfg.dur_lo_ms + (cfg.dur_hi_ms - cfg.dur_lo_ms) * fraction,
                timbre: Timbre::Series(series),
                gap_after_ms: 0.0,
            }
        }
    }
}

/// Sequence form of [`series_overview_tone`] over the given series.
pub fn series_overview_sequence(
    cfg: &SonificationConfig,
    model: &ChartModel,
    series: &[usize],
) -> Vec<ToneSpec> {
    with_gaps(
        cfg,
        series.iter().map(|&s| series_overview_tone(cfg, s, model)).collect(),
    )
}

/// Per-series tones for one bin: density tones for scatter, mean-value
/// tones for line/bar. Series without points in the bin are numb.
pub fn bin_series_sequence(
    cfg: &SonificationConfig,
    model: &ChartModel,
    tree: &SemanticTree,
    bin: NodeId,
    series: &[usize],
) -> Vec<ToneSpec> {
    let (axis, point_ids, counts) = match &tree.node(bin).payload {
        NodePayload::Bin {
            axis,
            point_ids,
            series_counts,
            ..
        } => (*axis, point_ids, series_counts),
        _ => return Vec::new(),
    };
    let tones = series
        .iter()
        .map(|&s| match model.kind() {
            ChartKind::Scatter => {
                tone_for_cell(cfg, counts[s], tree.max_series_bin_count(axis), s)
            }
            ChartKind::Line | ChartKind::Bar => {
                let ys: Vec<f64> = point_ids
                    .iter()
                    .map(|&id| &model.points[id])
                    .filter(|p| p.series_index == s)
                    .map(|p| p.y)
                    .collect();
                if ys.is_empty() {
                    numb_tone(cfg)
                } else {
                    value_tone(cfg, ys.iter().sum::<f64>() / ys.len() as f64, model.y_range)
                }
            }
        })
        .collect();
    with_gaps(cfg, tones)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SonificationConfig {
        SonificationConfig::default()
    }

    #[test]
    fn endpoints_and_midpoint() {
        let r = Range::new(-3.0, 7.0);
        assert_eq!(pitch_for_value(&cfg(), -3.0, r), 220.0);
        assert_eq!(pitch_for_value(&cfg(), 7.0, r), 1760.0);
        // geometric mean of 220 and 1760
        let mid = pitch_for_value(&cfg(), 2.0, r);
        assert!((mid - (220.0f64 * 1760.0).sqrt()).abs() < 1e-9);
        assert!((mid - 622.25).abs() < 0.01);
    }

    #[test]
    fn clamps_out_of_range() {
        let r = Range::new(0.0, 1.0);
        assert_eq!(pitch_for_value(&cfg(), -5.0, r), 220.0);
        assert_eq!(pitch_for_value(&cfg(), 5.0, r), 1760.0);
    }

    #[test]
    fn empty_cell_is_numb() {
        let t = tone_for_cell(&cfg(), 0, 5, 1);
        assert_eq!(t.timbre, Timbre::Numb);
        assert_eq!(t.pitch_hz, 160.0);
        assert_eq!(t.duration_ms, 40.0);
    }

    #[test]
    fn full_cell_gets_longest_duration() {
        let t = tone_for_cell(&cfg(), 7, 7, 2);
        assert_eq!(t.duration_ms, 400.0);
        assert_eq!(t.pitch_hz, 1760.0);
        assert_eq!(t.timbre, Timbre::Series(2));
    }

    #[test]
    fn counts_rise_in_pitch_and_duration() {
        let tones: Vec<_> = (1..=3).map(|c| tone_for_cell(&cfg(), c, 3, 0)).collect();
        for w in tones.windows(2) {
            assert!(w[0].pitch_hz < w[1].pitch_hz);
            assert!(w[0].duration_ms < w[1].duration_ms);
        }
        // 80 + 320/3, 80 + 640/3, 400
        assert!((tones[0].duration_ms - (80.0 + 320.0 / 3.0)).abs() < 1e-9);
        assert_eq!(tones[0].pitch_hz, 220.0);
    }
}
