//! Touch exploration engine for charts: a semantic navigation tree with
//! spoken and sonified descriptions, and a direct touch mode that maps the
//! finger onto the plot.

pub mod config;
pub mod dtm;
pub mod error;
pub mod geometry;
pub mod interaction;
pub mod model;
pub mod narration;
pub mod sonification;
pub mod tree;

pub use config::{DtmConfig, EngineConfig, GridConfig, GridSettings, SnfConfig, SonificationConfig};
pub use error::{LayoutError, ModelError};
pub use geometry::{DataPos, Rect, ScreenPoint, ScreenSize, Viewport};
pub use interaction::{Engine, Feedback, FeedbackEvent, Gesture, InputEvent, InteractionState, Mode, Session};
pub use model::{parse_dataset, ChartKind, ChartModel, ChartSpec, XKind};
pub use sonification::{Timbre, ToneSpec};
pub use tree::{NodeId, SemanticTree};
