use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid chart spec: {0}")]
    InvalidSpec(String),
    #[error("missing column {0:?} in CSV header")]
    MissingColumn(String),
    #[error("row {row}: {message}")]
    MalformedRow { row: u64, message: String },
    #[error("row {row}: unknown series {value:?}")]
    UnknownSeries { row: u64, value: String },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("no nodes to lay out")]
    NoNodes,
    #[error("page {page} out of range ({page_count} pages)")]
    PageOutOfRange { page: usize, page_count: usize },
    #[error("point ({x}, {y}) is outside the {width}x{height} screen")]
    OutsideScreen { x: f64, y: f64, width: u32, height: u32 },
}
