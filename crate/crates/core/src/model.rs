//! Typed chart model built from CSV input.

use std::collections::HashMap;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::{Range, Viewport};

/// Padding applied to each side of a data range, as a fraction of its span.
pub const RANGE_PADDING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Line,
    Bar,
    Scatter,
}

impl ChartKind {
    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Line => "line",
            ChartKind::Bar => "bar",
            ChartKind::Scatter => "scatter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XKind {
    Numeric,
    /// ISO-8601 calendar dates, stored as days since 1970-01-01.
    Temporal,
    /// Arbitrary labels, stored as first-appearance ordinals.
    Categorical,
}

/// What to draw and how to read it from the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_kind: XKind,
    pub series_names: Vec<String>,
    pub x_column: String,
    pub y_column: String,
    /// Column naming each row's series. May be omitted for single-series data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_column: Option<String>,
}

impl ChartSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.series_names.is_empty() {
            return Err(ModelError::InvalidSpec("series_names must not be empty".into()));
        }
        for (i, name) in self.series_names.iter().enumerate() {
            if self.series_names[..i].contains(name) {
                return Err(ModelError::InvalidSpec(format!("duplicate series name {name:?}")));
            }
        }
        if self.kind == ChartKind::Bar && self.x_kind == XKind::Numeric {
            return Err(ModelError::InvalidSpec(
                "bar charts need a categorical or temporal x axis".into(),
            ));
        }
        if self.series_column.is_none() && self.series_names.len() > 1 {
            return Err(ModelError::InvalidSpec(
                "series_column is required when more than one series is named".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
    pub series_index: usize,
}

/// Parsed dataset plus everything needed to read it back out loud.
///
/// Point ids are indices into `points`, which keeps CSV row order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartModel {
    pub spec: ChartSpec,
    pub points: Vec<DataPoint>,
    pub x_range: Range,
    pub y_range: Range,
    /// Category labels by ordinal, for categorical x axes.
    pub categories: Vec<String>,
}

/// `[min, max]` widened by [`RANGE_PADDING`] of the span on each side.
/// A zero span is replaced by `max(|value|, 1)` first.
pub fn padded_range(min: f64, max: f64) -> Range {
    let mut span = max - min;
    if span == 0.0 {
        span = min.abs().max(1.0);
    }
    Range::new(min - RANGE_PADDING * span, max + RANGE_PADDING * span)
}

impl ChartModel {
    /// Builds a model from already-typed points, computing padded ranges.
    pub fn from_points(
        spec: ChartSpec,
        points: Vec<DataPoint>,
        categories: Vec<String>,
    ) -> Result<Self, ModelError> {
        spec.validate()?;
        if points.is_empty() {
            return Err(ModelError::EmptyDataset);
        }
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(ModelError::MalformedRow {
                    row: i as u64 + 1,
                    message: "non-finite coordinate".into(),
                });
            }
            if p.series_index >= spec.series_names.len() {
                return Err(ModelError::UnknownSeries {
                    row: i as u64 + 1,
                    value: p.series_index.to_string(),
                });
            }
            x_min = x_min.min(p.x);
            x_max = x_max.max(p.x);
            y_min = y_min.min(p.y);
            y_max = y_max.max(p.y);
        }
        Ok(Self {
            spec,
            points,
            x_range: padded_range(x_min, x_max),
            y_range: padded_range(y_min, y_max),
            categories,
        })
    }

    /// Like [`ChartModel::from_points`] but with explicit ranges, which must
    /// contain every point.
    pub fn with_ranges(
        spec: ChartSpec,
        points: Vec<DataPoint>,
        categories: Vec<String>,
        x_range: Range,
        y_range: Range,
    ) -> Result<Self, ModelError> {
        let mut model = Self::from_points(spec, points, categories)?;
        if !(x_range.lo < x_range.hi && y_range.lo < y_range.hi) {
            return Err(ModelError::InvalidSpec("ranges must be non-degenerate".into()));
        }
        if model
            .points
            .iter()
            .any(|p| !x_range.contains(p.x) || !y_range.contains(p.y))
        {
            return Err(ModelError::InvalidSpec("ranges must contain every point".into()));
        }
        model.x_range = x_range;
        model.y_range = y_range;
        Ok(model)
    }

    pub fn kind(&self) -> ChartKind {
        self.spec.kind
    }

    pub fn series_count(&self) -> usize {
        self.spec.series_names.len()
    }

    pub fn series_name(&self, index: usize) -> &str {
        &self.spec.series_names[index]
    }

    pub fn full_viewport(&self) -> Viewport {
        Viewport::from_ranges(self.x_range, self.y_range)
    }

    pub fn series_points(&self, series: usize) -> impl Iterator<Item = (usize, &DataPoint)> {
        self.points
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.series_index == series)
    }

    /// Speakable form of an x coordinate.
    pub fn format_x(&self, x: f64) -> String {
        match self.spec.x_kind {
            XKind::Numeric => format_number(x),
            XKind::Temporal => format_day(x),
            XKind::Categorical => {
                if self.categories.is_empty() {
                    return format_number(x);
                }
                let idx = x.round().clamp(0.0, (self.categories.len() - 1) as f64) as usize;
                self.categories[idx].clone()
            }
        }
    }

    pub fn format_y(&self, y: f64) -> String {
        format_number(y)
    }
}

/// At most two decimals, trailing zeros dropped, no thousands separators.
pub fn format_number(v: f64) -> String {
    let rounded = (v * 100.0).round() / 100.0;
    let mut s = format!("{rounded:.2}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch")
}

/// Parses `YYYY-MM-DD` into days since 1970-01-01.
pub fn parse_day(text: &str) -> Option<f64> {
    let date = NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d").ok()?;
    Some((date - epoch()).num_days() as f64)
}

/// Day count to a calendar date, rounding fractional days to the nearest day.
pub fn day_to_date(day: f64) -> Option<NaiveDate> {
    let d = day.round();
    if !d.is_finite() || d.abs() > 3.0e6 {
        return None;
    }
    let d = d as i64;
    if d >= 0 {
        epoch().checked_add_days(Days::new(d as u64))
    } else {
        epoch().checked_sub_days(Days::new(d.unsigned_abs()))
    }
}

/// Renders a day count as "Month D YYYY".
pub fn format_day(day: f64) -> String {
    match day_to_date(day) {
        Some(date) => date.format("%B %-d %Y").to_string(),
        None => format_number(day),
    }
}

/// Parses CSV text according to `spec`.
///
/// The dialect is fixed: comma separated, double-quote escaping, UTF-8,
/// header row first. Rows with empty cells are rejected.
pub fn parse_dataset(csv_text: &str, spec: &ChartSpec) -> Result<ChartModel, ModelError> {
    spec.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(csv_text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| ModelError::Csv(e.to_string()))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| ModelError::MissingColumn(name.to_string()))
    };
    let x_col = column(&spec.x_column)?;
    let y_col = column(&spec.y_column)?;
    let series_col = spec.series_column.as_deref().map(column).transpose()?;

    let mut points = Vec::new();
    let mut categories: Vec<String> = Vec::new();
    let mut category_index: HashMap<String, usize> = HashMap::new();

    for (i, record) in reader.records().enumerate() {
        let row = i as u64 + 1;
        let record = record.map_err(|e| {
            let row = e.position().map_or(row, |p| p.record());
            ModelError::MalformedRow {
                row,
                message: e.to_string(),
            }
        })?;
        let cell = |idx: usize, name: &str| -> Result<&str, ModelError> {
            let value = record.get(idx).unwrap_or("").trim();
            if value.is_empty() {
                return Err(ModelError::MalformedRow {
                    row,
                    message: format!("empty cell in column {name:?}"),
                });
            }
            Ok(value)
        };

        let x_text = cell(x_col, &spec.x_column)?;
        let x = match spec.x_kind {
            XKind::Numeric => parse_finite(x_text).ok_or_else(|| ModelError::MalformedRow {
                row,
                message: format!("x value {x_text:?} is not a finite number"),
            })?,
            XKind::Temporal => parse_day(x_text).ok_or_else(|| ModelError::MalformedRow {
                row,
                message: format!("x value {x_text:?} is not an ISO-8601 date"),
            })?,
            XKind::Categorical => {
                let next = categories.len();
                let idx = *category_index.entry(x_text.to_string()).or_insert_with(|| {
                    categories.push(x_text.to_string());
                    next
                });
                idx as f64
            }
        };

        let y_text = cell(y_col, &spec.y_column)?;
        let y = parse_finite(y_text).ok_or_else(|| ModelError::MalformedRow {
            row,
            message: format!("y value {y_text:?} is not a finite number"),
        })?;

        let series_index = match (series_col, spec.series_column.as_deref()) {
            (Some(idx), Some(name)) => {
                let value = cell(idx, name)?;
                spec.series_names
                    .iter()
                    .position(|s| s == value)
                    .ok_or_else(|| ModelError::UnknownSeries {
                        row,
                        value: value.to_string(),
                    })?
            }
            _ => 0,
        };

        points.push(DataPoint { x, y, series_index });
    }

    ChartModel::from_points(spec.clone(), points, categories)
}

fn parse_finite(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn spec(kind: ChartKind, x_kind: XKind, series: &[&str]) -> ChartSpec {
        ChartSpec {
            kind,
            title: "Test".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_kind,
            series_names: series.iter().map(|s| s.to_string()).collect(),
            x_column: "x".into(),
            y_column: "y".into(),
            series_column: Some("s".into()),
        }
    }

    #[test]
    fn five_rows_padded_by_five_percent() {
        let csv = "x,y,s\n1,1,a\n2,2,a\n3,3,a\n4,4,a\n5,5,a\n";
        let model = parse_dataset(csv, &spec(ChartKind::Scatter, XKind::Numeric, &["a"])).unwrap();
        assert_eq!(model.points.len(), 5);
        assert!((model.y_range.lo - 0.8).abs() < 1e-12);
        assert!((model.y_range.hi - 5.2).abs() < 1e-12);
    }

    #[test]
    fn single_row_uses_degenerate_span() {
        let csv = "x,y,s\na,1,s1\n";
        let model =
            parse_dataset(csv, &spec(ChartKind::Line, XKind::Categorical, &["s1"])).unwrap();
        assert_eq!(model.points.len(), 1);
        assert_eq!(model.points[0], DataPoint { x: 0.0, y: 1.0, series_index: 0 });
        // x = 0 -> span 1; y = 1 -> span 1
        assert!((model.x_range.lo + 0.05).abs() < 1e-12 && (model.x_range.hi - 0.05).abs() < 1e-12);
        assert!((model.y_range.lo - 0.95).abs() < 1e-12 && (model.y_range.hi - 1.05).abs() < 1e-12);
        assert!(model.x_range.lo < model.x_range.hi);
    }

    #[test]
    fn categories_keep_first_appearance_order() {
        let csv = "x,y,s\nbeta,1,a\nalpha,2,a\nbeta,3,a\ngamma,4,a\n";
        let model = parse_dataset(csv, &spec(ChartKind::Bar, XKind::Categorical, &["a"])).unwrap();
        assert_eq!(model.categories, vec!["beta", "alpha", "gamma"]);
        let xs: Vec<f64> = model.points.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 1.0, 0.0, 2.0]);
        assert_eq!(model.format_x(1.0), "alpha");
    }

    #[test]
    fn temporal_values_are_day_counts() {
        let csv = "x,y,s\n2022-08-17,130,WA\n";
        let model = parse_dataset(csv, &spec(ChartKind::Line, XKind::Temporal, &["WA"])).unwrap();
        assert_eq!(model.format_x(model.points[0].x), "August 17 2022");
        assert_eq!(parse_day("1970-01-02"), Some(1.0));
        assert_eq!(format_day(-1.0), "December 31 1969");
    }

    #[test]
    fn errors_name_the_row() {
        let s = spec(ChartKind::Scatter, XKind::Numeric, &["a"]);
        let err = parse_dataset("x,y,s\n1,1,a\n2,oops,a\n", &s).unwrap_err();
        assert!(matches!(err, ModelError::MalformedRow { row: 2, .. }), "{err}");
        let err = parse_dataset("x,y,s\n1,1,a\n2,2\n", &s).unwrap_err();
        assert!(matches!(err, ModelError::MalformedRow { row: 2, .. }), "{err}");
        let err = parse_dataset("x,y,s\n1,,a\n", &s).unwrap_err();
        assert!(matches!(err, ModelError::MalformedRow { row: 1, .. }), "{err}");
    }

    #[test]
    fn unknown_series_and_empty_dataset() {
        let s = spec(ChartKind::Scatter, XKind::Numeric, &["a"]);
        let err = parse_dataset("x,y,s\n1,1,b\n", &s).unwrap_err();
        assert_eq!(err, ModelError::UnknownSeries { row: 1, value: "b".into() });
        let err = parse_dataset("x,y,s\n", &s).unwrap_err();
        assert_eq!(err, ModelError::EmptyDataset);
        assert_eq!(err.to_string(), "empty dataset");
        let err = parse_dataset("x,q,s\n1,1,a\n", &s).unwrap_err();
        assert_eq!(err, ModelError::MissingColumn("y".into()));
    }

    #[test]
    fn spec_invariants() {
        let mut s = spec(ChartKind::Bar, XKind::Numeric, &["a"]);
        assert!(s.validate().is_err());
        s.x_kind = XKind::Temporal;
        assert!(s.validate().is_ok());
        let s = spec(ChartKind::Line, XKind::Numeric, &["a", "a"]);
        assert!(s.validate().is_err());
        let s = spec(ChartKind::Line, XKind::Numeric, &[]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn quoted_fields() {
        let csv = "x,y,s\n\"a, b\",1,\"x\"\"y\"\n";
        let model =
            parse_dataset(csv, &spec(ChartKind::Line, XKind::Categorical, &["x\"y"])).unwrap();
        assert_eq!(model.categories, vec!["a, b"]);
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(130.0), "130");
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1.234), "1.23");
        assert_eq!(format_number(-0.001), "0");
        assert_eq!(format_number(12345.678), "12345.68");
    }
}
