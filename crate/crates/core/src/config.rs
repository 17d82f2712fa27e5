//! Tunable constants for every engine subsystem. Every field has a default,
//! so an empty document is a valid configuration.

use serde::{Deserialize, Serialize};

use crate::geometry::ScreenSize;
use crate::model::{ChartKind, ChartModel};

/// Resolved grid used to build bins and cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridConfig {
    pub x_bins: usize,
    pub y_cells_per_bin: usize,
}

pub const DEFAULT_SCATTER_BINS: usize = 9;
pub const DEFAULT_CELLS_PER_BIN: usize = 9;
pub const MAX_DEFAULT_LINE_BINS: usize = 31;

/// Grid as written in a config document; missing values default per chart kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_cells_per_bin: Option<usize>,
}

impl GridSettings {
    pub fn resolve(&self, model: &ChartModel) -> GridConfig {
        let default_bins = match model.kind() {
            ChartKind::Scatter => DEFAULT_SCATTER_BINS,
            ChartKind::Line | ChartKind::Bar => {
                let per_series = (0..model.series_count())
                    .map(|s| model.series_points(s).count())
                    .max()
                    .unwrap_or(1);
                per_series.clamp(1, MAX_DEFAULT_LINE_BINS)
            }
        };
        GridConfig {
            x_bins: self.x_bins.unwrap_or(default_bins).max(1),
            y_cells_per_bin: self.y_cells_per_bin.unwrap_or(DEFAULT_CELLS_PER_BIN).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SonificationConfig {
    pub pitch_lo_hz: f64,
    pub pitch_hi_hz: f64,
    pub dur_lo_ms: f64,
    pub dur_hi_ms: f64,
    pub gap_ms: f64,
    pub numb_pitch_hz: f64,
    pub numb_ms: f64,
    /// Duration of single value tones (line/bar points, DTM projection).
    pub tone_ms: f64,
}

impl Default for SonificationConfig {
    fn default() -> Self {
        Self {
            pitch_lo_hz: 220.0,
            pitch_hi_hz: 1760.0,
            dur_lo_ms: 80.0,
            dur_hi_ms: 400.0,
            gap_ms: 60.0,
            numb_pitch_hz: 160.0,
            numb_ms: 40.0,
            tone_ms: 120.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DtmConfig {
    pub radius_cover_distance: usize,
    pub min_rad_px: f64,
    pub max_rad_px: f64,
    pub hit_tolerance_px: f64,
    pub min_interval_ms: u64,
    /// Width of the axis strips along the left and bottom screen edges.
    pub axis_strip_px: f64,
    pub step_low_hz: f64,
    pub step_high_hz: f64,
    pub step_note_ms: f64,
}

impl Default for DtmConfig {
    fn default() -> Self {
        Self {
            radius_cover_distance: 3,
            min_rad_px: 12.0,
            max_rad_px: 48.0,
            hit_tolerance_px: 16.0,
            min_interval_ms: 80,
            axis_strip_px: 24.0,
            step_low_hz: 880.0,
            step_high_hz: 1175.0,
            step_note_ms: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnfConfig {
    pub min_touch_px: u32,
}

impl Default for SnfConfig {
    fn default() -> Self {
        Self { min_touch_px: 48 }
    }
}

pub const DEFAULT_SCREEN: ScreenSize = ScreenSize::new(390, 844);

/// Everything the engine needs besides the chart itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub grid: GridConfig,
    pub screen: ScreenSize,
    pub snf: SnfConfig,
    pub dtm: DtmConfig,
    pub sonification: SonificationConfig,
}

impl EngineConfig {
    /// Default constants with the grid resolved for `model`.
    pub fn defaults_for(model: &ChartModel) -> Self {
        Self {
            grid: GridSettings::default().resolve(model),
            screen: DEFAULT_SCREEN,
            snf: SnfConfig::default(),
            dtm: DtmConfig::default(),
            sonification: SonificationConfig::default(),
        }
    }
}
