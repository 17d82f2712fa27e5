//! Screen/data coordinate spaces and the affine map between them.
//!
//! Screen space is in logical pixels with the origin at the top-left corner
//! and y growing downward. Data space is the chart's own coordinate system
//! with y growing upward.

use serde::{Deserialize, Serialize};

/// A position in logical screen pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenPoint {
    pub x: f64,
    pub y: f64,
}

impl ScreenPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: ScreenPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A position in data space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPos {
    pub x: f64,
    pub y: f64,
}

impl DataPos {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Screen dimensions in whole logical pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScreenSize {
    pub width: u32,
    pub height: u32,
}

impl ScreenSize {
    pub const fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub fn contains(self, q: ScreenPoint) -> bool {
        q.x >= 0.0 && q.y >= 0.0 && q.x <= f64::from(self.width) && q.y <= f64::from(self.height)
    }

    /// Clamps a point into the closed screen rectangle.
    pub fn clamp(self, q: ScreenPoint) -> ScreenPoint {
        ScreenPoint {
            x: q.x.clamp(0.0, f64::from(self.width)),
            y: q.y.clamp(0.0, f64::from(self.height)),
        }
    }

    pub fn center(self) -> ScreenPoint {
        ScreenPoint::new(f64::from(self.width) / 2.0, f64::from(self.height) / 2.0)
    }

    pub fn area(self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }
}

/// Inclusive numeric interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn span(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn center(self) -> f64 {
        self.lo + self.span() / 2.0
    }
}

/// The visible window of data space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Viewport {
    pub const fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    pub fn from_ranges(x: Range, y: Range) -> Self {
        Self::new(x.lo, x.hi, y.lo, y.hi)
    }

    pub fn x_range(&self) -> Range {
        Range::new(self.x_lo, self.x_hi)
    }

    pub fn y_range(&self) -> Range {
        Range::new(self.y_lo, self.y_hi)
    }

    pub fn is_valid(&self) -> bool {
        self.x_lo.is_finite()
            && self.x_hi.is_finite()
            && self.y_lo.is_finite()
            && self.y_hi.is_finite()
            && self.x_lo < self.x_hi
            && self.y_lo < self.y_hi
    }

    pub fn contains(&self, p: DataPos) -> bool {
        self.x_range().contains(p.x) && self.y_range().contains(p.y)
    }

    /// True when `self` lies within `outer` (edges may coincide).
    pub fn within(&self, outer: &Viewport) -> bool {
        self.x_lo >= outer.x_lo
            && self.x_hi <= outer.x_hi
            && self.y_lo >= outer.y_lo
            && self.y_hi <= outer.y_hi
    }

    pub fn center(&self) -> DataPos {
        DataPos::new(self.x_range().center(), self.y_range().center())
    }
}

/// Maps a data-space point to screen space. Points outside the viewport map
/// outside the screen rectangle; callers clip.
pub fn data_to_screen(p: DataPos, vp: &Viewport, screen: ScreenSize) -> ScreenPoint {
    let w = f64::from(screen.width);
    let h = f64::from(screen.height);
    ScreenPoint {
        x: (p.x - vp.x_lo) / (vp.x_hi - vp.x_lo) * w,
        y: (vp.y_hi - p.y) / (vp.y_hi - vp.y_lo) * h,
    }
}

/// Inverse of [`data_to_screen`].
pub fn screen_to_data(q: ScreenPoint, vp: &Viewport, screen: ScreenSize) -> DataPos {
    let w = f64::from(screen.width);
    let h = f64::from(screen.height);
    DataPos {
        x: vp.x_lo + q.x / w * (vp.x_hi - vp.x_lo),
        y: vp.y_hi - q.y / h * (vp.y_hi - vp.y_lo),
    }
}

/// Axis-aligned pixel rectangle `[x0, x1) x [y0, y1)`; edges lying on the
/// screen's right or bottom border are treated as closed by hit testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl Rect {
    pub const fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> u32 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width()) * u64::from(self.height())
    }

    pub fn center(&self) -> ScreenPoint {
        ScreenPoint::new(
            (f64::from(self.x0) + f64::from(self.x1)) / 2.0,
            (f64::from(self.y0) + f64::from(self.y1)) / 2.0,
        )
    }

    /// Half-open containment, closing the far edges that touch the screen border.
    pub fn claims(&self, q: ScreenPoint, screen: ScreenSize) -> bool {
        let in_x = q.x >= f64::from(self.x0)
            && (q.x < f64::from(self.x1) || (self.x1 == screen.width && q.x <= f64::from(self.x1)));
        let in_y = q.y >= f64::from(self.y0)
            && (q.y < f64::from(self.y1) || (self.y1 == screen.height && q.y <= f64::from(self.y1)));
        in_x && in_y
    }

    pub fn interiors_overlap(&self, other: &Rect) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }
}

/// Euclidean distance from `q` to the segment `a`-`b`.
pub fn distance_to_segment(q: ScreenPoint, a: ScreenPoint, b: ScreenPoint) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return q.distance(a);
    }
    let t = (((q.x - a.x) * dx + (q.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    q.distance(ScreenPoint::new(a.x + t * dx, a.y + t * dy))
}

/// Distance from `q` to a rectangle given by two opposite corners; zero inside.
pub fn distance_to_box(q: ScreenPoint, a: ScreenPoint, b: ScreenPoint) -> f64 {
    let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
    let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
    let dx = (x0 - q.x).max(0.0).max(q.x - x1);
    let dy = (y0 - q.y).max(0.0).max(q.y - y1);
    dx.hypot(dy)
}
